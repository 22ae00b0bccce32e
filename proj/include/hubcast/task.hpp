#pragma once

#include <array>
#include <compare>
#include <set>
#include <string>
#include <vector>

#include "hubcast/date.hpp"
#include "hubcast/location.hpp"

namespace hubcast {

// The 23 canonical quantile levels: 11 central prediction intervals plus the
// median. Lower tails first, median in the middle, upper tails mirrored.
namespace quantile_levels {

inline constexpr std::size_t kCount = 23;
inline constexpr std::size_t kNumIntervals = 11;  // K
inline constexpr std::size_t kMedianIndex = 11;

inline constexpr std::array<double, kCount> kLevels = {
    0.01, 0.025, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
    0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.975, 0.99};

// Interval widths alpha_k; interval k spans levels [k] .. [kCount-1-k].
inline constexpr std::array<double, kNumIntervals> kAlphas = {
    0.02, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90};

// Canonical decimal spelling used in hub submission files; matching is by
// exact string to avoid float round-trip pitfalls.
const std::array<std::string, kCount>& strings();

// Index of a level given its canonical string, or -1 if not canonical.
int index_of(const std::string& level_string);

}  // namespace quantile_levels

inline constexpr int kMinHorizon = 0;
inline constexpr int kMaxHorizon = 3;

// One forecasting task: who forecast what for when.
struct TaskKey {
    Date reference_date;     // Saturday ending the epiweek of submission
    std::string location;    // Location::code
    int horizon = 0;         // weeks ahead, 0..3

    Date target_end_date() const { return reference_date.plus_weeks(horizon); }

    auto operator<=>(const TaskKey&) const = default;
};

// Cartesian product of dates x locations x horizons in lexicographic order
// (date, location code, horizon). Throws on empty axes or out-of-range horizons.
std::vector<TaskKey> build_task_space(const std::vector<Date>& reference_dates,
                                      const std::vector<Location>& locations,
                                      const std::set<int>& horizons);

}  // namespace hubcast
