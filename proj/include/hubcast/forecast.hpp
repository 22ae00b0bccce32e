#pragma once

#include <array>
#include <vector>

#include "hubcast/task.hpp"

namespace hubcast {

// Predictive distribution for one task as 23 quantile values aligned with
// quantile_levels::kLevels. Values must be finite, non-negative, and
// non-decreasing across levels; the constructor enforces all three.
class QuantileForecast {
public:
    QuantileForecast(TaskKey task, std::array<double, quantile_levels::kCount> values);

    const TaskKey& task() const { return task_; }
    const std::array<double, quantile_levels::kCount>& values() const { return values_; }

    double value_at(std::size_t level_index) const { return values_[level_index]; }
    double median() const { return values_[quantile_levels::kMedianIndex]; }

    // Lower/upper bound of central interval k (alpha = kAlphas[k]).
    double interval_lower(std::size_t k) const { return values_[k]; }
    double interval_upper(std::size_t k) const {
        return values_[quantile_levels::kCount - 1 - k];
    }

private:
    TaskKey task_;
    std::array<double, quantile_levels::kCount> values_;
};

// Predictive distribution for one task as a vector of samples (used by the
// sample-based scores). At least two finite samples.
class SampleForecast {
public:
    SampleForecast(TaskKey task, std::vector<double> samples);

    const TaskKey& task() const { return task_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    TaskKey task_;
    std::vector<double> samples_;
};

}  // namespace hubcast
