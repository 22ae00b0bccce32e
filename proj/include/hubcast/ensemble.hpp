#pragma once

#include <map>
#include <string>
#include <vector>

#include "hubcast/forecast.hpp"

namespace hubcast {

enum class Combiner { MeanPerQuantile, MedianPerQuantile };

struct EnsembleSpec {
    std::vector<std::string> members;
    Combiner combiner = Combiner::MeanPerQuantile;
    // With skip_if_missing, absent members are dropped as long as at least
    // min_members remain; otherwise any absent member is an error.
    bool skip_if_missing = false;
    std::size_t min_members = 1;
};

// Ascending sort of the 23 values: the minimal monotone rearrangement of a
// fixed multiset. Identity on already-monotone input; idempotent.
std::array<double, quantile_levels::kCount> repair_monotone(
    std::array<double, quantile_levels::kCount> values);

// Per-level mean or median across member forecasts for one task, followed by
// monotonicity repair and a clamp at zero.
QuantileForecast combine(const EnsembleSpec& spec,
                         const std::map<std::string, QuantileForecast>& forecasts);

}  // namespace hubcast
