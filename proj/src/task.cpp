#include "hubcast/task.hpp"

#include <algorithm>
#include <stdexcept>

namespace hubcast {

namespace quantile_levels {

const std::array<std::string, kCount>& strings() {
    static const std::array<std::string, kCount> s = {
        "0.01", "0.025", "0.05", "0.1",  "0.15", "0.2",  "0.25", "0.3",
        "0.35", "0.4",   "0.45", "0.5",  "0.55", "0.6",  "0.65", "0.7",
        "0.75", "0.8",   "0.85", "0.9",  "0.95", "0.975", "0.99"};
    return s;
}

int index_of(const std::string& level_string) {
    const auto& s = strings();
    auto it = std::find(s.begin(), s.end(), level_string);
    if (it == s.end()) return -1;
    return static_cast<int>(it - s.begin());
}

}  // namespace quantile_levels

std::vector<TaskKey> build_task_space(const std::vector<Date>& reference_dates,
                                      const std::vector<Location>& locations,
                                      const std::set<int>& horizons) {
    if (reference_dates.empty() || locations.empty() || horizons.empty()) {
        throw std::invalid_argument("empty task-space axis");
    }
    for (int h : horizons) {
        if (h < kMinHorizon || h > kMaxHorizon) {
            throw std::invalid_argument("horizon " + std::to_string(h) + " outside 0..3");
        }
    }

    std::vector<Date> dates = reference_dates;
    std::sort(dates.begin(), dates.end());
    std::vector<std::string> codes;
    codes.reserve(locations.size());
    for (const auto& loc : locations) codes.push_back(loc.code);
    std::sort(codes.begin(), codes.end());

    std::vector<TaskKey> tasks;
    tasks.reserve(dates.size() * codes.size() * horizons.size());
    for (const Date& d : dates) {
        for (const std::string& code : codes) {
            for (int h : horizons) {
                tasks.push_back(TaskKey{d, code, h});
            }
        }
    }
    return tasks;
}

}  // namespace hubcast
