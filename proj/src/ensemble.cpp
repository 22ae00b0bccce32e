#include "hubcast/ensemble.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hubcast {

std::array<double, quantile_levels::kCount> repair_monotone(
    std::array<double, quantile_levels::kCount> values) {
    std::sort(values.begin(), values.end());
    return values;
}

QuantileForecast combine(const EnsembleSpec& spec,
                         const std::map<std::string, QuantileForecast>& forecasts) {
    if (spec.members.empty()) throw std::invalid_argument("ensemble has no members");
    {
        std::set<std::string> distinct(spec.members.begin(), spec.members.end());
        if (distinct.size() != spec.members.size()) {
            throw std::invalid_argument("duplicate ensemble member ids");
        }
    }

    std::vector<const QuantileForecast*> present;
    std::vector<std::string> absent;
    for (const std::string& id : spec.members) {
        auto it = forecasts.find(id);
        if (it == forecasts.end()) {
            absent.push_back(id);
        } else {
            present.push_back(&it->second);
        }
    }
    if (!absent.empty() && !spec.skip_if_missing) {
        std::string msg = "missing ensemble members:";
        for (const auto& id : absent) msg += " " + id;
        throw std::invalid_argument(msg);
    }
    if (present.size() < std::max<std::size_t>(spec.min_members, 1)) {
        throw std::invalid_argument("too few ensemble members present (" +
                                    std::to_string(present.size()) + ")");
    }

    const TaskKey& task = present.front()->task();
    for (const auto* f : present) {
        if (f->task() != task) throw std::invalid_argument("ensemble members disagree on task");
    }

    std::array<double, quantile_levels::kCount> combined{};
    std::vector<double> level_values(present.size());
    for (std::size_t level = 0; level < quantile_levels::kCount; ++level) {
        for (std::size_t m = 0; m < present.size(); ++m) {
            level_values[m] = present[m]->value_at(level);
        }
        if (spec.combiner == Combiner::MeanPerQuantile) {
            double sum = 0.0;
            for (double v : level_values) sum += v;
            combined[level] = sum / static_cast<double>(level_values.size());
        } else {
            std::sort(level_values.begin(), level_values.end());
            const std::size_t n = level_values.size();
            combined[level] = (n % 2 == 1)
                                  ? level_values[n / 2]
                                  : 0.5 * (level_values[n / 2 - 1] + level_values[n / 2]);
        }
    }

    combined = repair_monotone(combined);
    for (double& v : combined) v = std::max(v, 0.0);
    return QuantileForecast(task, combined);
}

}  // namespace hubcast
