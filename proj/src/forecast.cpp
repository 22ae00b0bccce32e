#include "hubcast/forecast.hpp"

#include <cmath>
#include <stdexcept>

namespace hubcast {

QuantileForecast::QuantileForecast(TaskKey task,
                                   std::array<double, quantile_levels::kCount> values)
    : task_(std::move(task)), values_(values) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw std::invalid_argument("non-finite quantile value");
        if (values_[i] < 0.0) throw std::invalid_argument("negative quantile value");
        if (i > 0 && values_[i] < values_[i - 1]) {
            throw std::invalid_argument("quantile crossing at level index " + std::to_string(i));
        }
    }
}

SampleForecast::SampleForecast(TaskKey task, std::vector<double> samples)
    : task_(std::move(task)), samples_(std::move(samples)) {
    if (samples_.size() < 2) throw std::invalid_argument("need at least 2 samples");
    for (double s : samples_) {
        if (!std::isfinite(s)) throw std::invalid_argument("non-finite sample");
    }
}

}  // namespace hubcast
