#include "hubcast/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace hubcast {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double empirical_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

std::array<double, quantile_levels::kCount> empirical_quantiles_23(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::array<double, quantile_levels::kCount> out{};
    for (std::size_t i = 0; i < quantile_levels::kCount; ++i) {
        out[i] = quantile_sorted(values, quantile_levels::kLevels[i]);
    }
    return out;
}

}  // namespace hubcast
