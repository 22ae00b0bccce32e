#include "hubcast/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hubcast {

void ScoreTable::add(const ScoreRecord& record) {
    auto key = std::make_tuple(record.model_id, record.task, record.metric);
    if (!records_.emplace(std::move(key), record.value).second) {
        throw std::invalid_argument("duplicate score record for model " + record.model_id);
    }
}

std::optional<double> ScoreTable::value(const std::string& model_id, const TaskKey& task,
                                        Metric metric) const {
    auto it = records_.find(std::make_tuple(model_id, task, metric));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> ScoreTable::model_ids() const {
    std::set<std::string> ids;
    for (const auto& [key, value] : records_) ids.insert(std::get<0>(key));
    return {ids.begin(), ids.end()};
}

std::size_t eligibility_cutoff(std::size_t task_space_size, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold outside (0,1]");
    }
    return static_cast<std::size_t>(
        std::floor(threshold * static_cast<double>(task_space_size) + 1e-9));
}

std::map<std::string, bool> eligibility(const ScoreTable& table,
                                        const std::vector<TaskKey>& task_space,
                                        double threshold, Metric metric) {
    if (task_space.empty()) throw std::invalid_argument("empty task space");
    const std::set<TaskKey> space(task_space.begin(), task_space.end());
    const std::size_t cutoff = eligibility_cutoff(space.size(), threshold);

    std::map<std::string, std::size_t> covered;
    for (const auto& [key, value] : table.records()) {
        if (std::get<2>(key) != metric) continue;
        if (space.count(std::get<1>(key))) ++covered[std::get<0>(key)];
    }
    std::map<std::string, bool> out;
    for (const std::string& id : table.model_ids()) {
        out[id] = covered[id] >= cutoff;
    }
    return out;
}

namespace {

using TaskScores = std::vector<std::pair<TaskKey, double>>;  // sorted by task

// Mean scores of the two models over the tasks both scored; nullopt when the
// intersection is empty.
std::optional<std::pair<double, double>> shared_means(const TaskScores& a, const TaskScores& b) {
    double sum_a = 0.0, sum_b = 0.0;
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sum_a += ia->second;
            sum_b += ib->second;
            ++n;
            ++ia;
            ++ib;
        }
    }
    if (n == 0) return std::nullopt;
    const double dn = static_cast<double>(n);
    return std::make_pair(sum_a / dn, sum_b / dn);
}

std::map<std::string, TaskScores> scores_by_model(const ScoreTable& table, Metric metric) {
    std::map<std::string, TaskScores> out;
    for (const auto& [key, value] : table.records()) {
        if (std::get<2>(key) != metric) continue;
        out[std::get<0>(key)].emplace_back(std::get<1>(key), value);
    }
    return out;  // record order already sorts each vector by task
}

}  // namespace

std::map<std::string, std::optional<double>> pairwise_relative(
    const ScoreTable& table, Metric metric, const std::string& baseline_model,
    bool eligible_only, const std::vector<TaskKey>* task_space, double eligibility_threshold,
    double mean_floor) {
    const auto by_model = scores_by_model(table, metric);
    if (!by_model.count(baseline_model)) {
        throw std::invalid_argument("baseline model " + baseline_model + " not in score table");
    }
    std::vector<std::string> models;
    for (const auto& [id, scores] : by_model) models.push_back(id);
    if (eligible_only) {
        if (!task_space) throw std::invalid_argument("eligible_only requires a task space");
        auto flags = eligibility(table, *task_space, eligibility_threshold, metric);
        std::vector<std::string> kept;
        for (const auto& id : models) {
            if (flags[id] || id == baseline_model) kept.push_back(id);
        }
        models = std::move(kept);
    }

    // theta_i = geometric mean over all j with a shared task (self included)
    // of mean_i / mean_j on the shared set.
    std::map<std::string, std::optional<double>> theta;
    for (const std::string& i : models) {
        double log_sum = 0.0;
        std::size_t n_opponents = 0;
        for (const std::string& j : models) {
            auto means = (i == j) ? std::make_optional(std::make_pair(1.0, 1.0))
                                  : shared_means(by_model.at(i), by_model.at(j));
            if (!means) continue;
            const double mi = std::max(means->first, mean_floor);
            const double mj = std::max(means->second, mean_floor);
            log_sum += std::log(mi) - std::log(mj);
            ++n_opponents;
        }
        theta[i] = std::exp(log_sum / static_cast<double>(n_opponents));
    }

    // Rescale so the baseline reads exactly one; models sharing nothing with
    // the baseline have no comparable scale and stay absent.
    const double base = *theta.at(baseline_model);
    std::map<std::string, std::optional<double>> out;
    for (const std::string& i : models) {
        if (i == baseline_model) {
            out[i] = 1.0;
            continue;
        }
        if (!shared_means(by_model.at(i), by_model.at(baseline_model))) {
            out[i] = std::nullopt;
            continue;
        }
        out[i] = *theta[i] / base;
    }
    return out;
}

std::map<std::pair<std::string, TaskKey>, double> standardized_ranks(const ScoreTable& table,
                                                                     Metric metric) {
    // Group scores per task.
    std::map<TaskKey, std::vector<std::pair<std::string, double>>> by_task;
    for (const auto& [key, value] : table.records()) {
        if (std::get<2>(key) != metric) continue;
        by_task[std::get<1>(key)].emplace_back(std::get<0>(key), value);
    }

    std::map<std::pair<std::string, TaskKey>, double> out;
    for (auto& [task, entries] : by_task) {
        const std::size_t n = entries.size();
        if (n < 2) continue;  // rank undefined on single-model tasks
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        // Position p (0 = best) maps to 1 - p/(n-1); ties share the mean of
        // their positions' values.
        std::size_t p = 0;
        while (p < n) {
            std::size_t q = p;
            while (q + 1 < n && entries[q + 1].second == entries[p].second) ++q;
            double sum = 0.0;
            for (std::size_t r = p; r <= q; ++r) {
                sum += 1.0 - static_cast<double>(r) / static_cast<double>(n - 1);
            }
            const double tied_value = sum / static_cast<double>(q - p + 1);
            for (std::size_t r = p; r <= q; ++r) {
                out[{entries[r].first, task}] = tied_value;
            }
            p = q + 1;
        }
    }
    return out;
}

std::map<std::pair<std::string, int>, double> horizon_breakdown(const ScoreTable& table,
                                                                Metric metric) {
    std::map<std::pair<std::string, int>, std::pair<double, std::size_t>> acc;
    for (const auto& [key, value] : table.records()) {
        if (std::get<2>(key) != metric) continue;
        auto& slot = acc[{std::get<0>(key), std::get<1>(key).horizon}];
        slot.first += value;
        slot.second += 1;
    }
    std::map<std::pair<std::string, int>, double> out;
    for (const auto& [key, sum_count] : acc) {
        out[key] = sum_count.first / static_cast<double>(sum_count.second);
    }
    return out;
}

std::map<std::string, MeanScore> mean_scores(const ScoreTable& table, Metric metric) {
    std::map<std::string, MeanScore> out;
    for (const auto& [key, value] : table.records()) {
        if (std::get<2>(key) != metric) continue;
        auto& row = out[std::get<0>(key)];
        row.mean += value;
        row.n_tasks += 1;
    }
    for (auto& [id, row] : out) {
        row.mean /= static_cast<double>(row.n_tasks);
    }
    return out;
}

}  // namespace hubcast
