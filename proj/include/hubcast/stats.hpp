#pragma once

#include <array>
#include <vector>

#include "hubcast/task.hpp"

namespace hubcast {

// Empirical quantile with linear interpolation between order statistics
// (numpy.percentile's default): position p*(n-1) into the sorted sample.
double empirical_quantile(std::vector<double> values, double p);

// All 23 canonical levels at once; sorts a copy of the input once.
std::array<double, quantile_levels::kCount> empirical_quantiles_23(std::vector<double> values);

}  // namespace hubcast
