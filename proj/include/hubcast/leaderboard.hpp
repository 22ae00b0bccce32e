#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hubcast/scoring.hpp"
#include "hubcast/task.hpp"

namespace hubcast {

// Per-task score matrix: at most one value per (model, task, metric).
class ScoreTable {
public:
    void add(const ScoreRecord& record);

    std::optional<double> value(const std::string& model_id, const TaskKey& task,
                                Metric metric) const;

    std::vector<std::string> model_ids() const;
    std::size_t size() const { return records_.size(); }

    // All records, ordered by (model, task, metric).
    const std::map<std::tuple<std::string, TaskKey, Metric>, double>& records() const {
        return records_;
    }

private:
    std::map<std::tuple<std::string, TaskKey, Metric>, double> records_;
};

struct LeaderboardRow {
    std::string model_id;
    std::size_t n_tasks = 0;
    double mean_score = 0.0;
    std::optional<double> pairwise_relative;  // absent when undefined
    bool eligible = false;
};

// Minimum scored-task count implied by the coverage threshold. Fractional
// products round down, matching the hub convention (80% of 3,432 -> 2,745).
std::size_t eligibility_cutoff(std::size_t task_space_size, double threshold);

// Eligibility flags for every model in the table: scored-task count under the
// metric, restricted to the declared task space, must reach the cutoff.
std::map<std::string, bool> eligibility(const ScoreTable& table,
                                        const std::vector<TaskKey>& task_space,
                                        double threshold, Metric metric);

// Pairwise relative skill: for each model, the geometric mean over all models
// (self included, ratio one) of mean-score ratios computed on the tasks both
// models scored; the result is rescaled so the baseline model reads exactly 1.
// Models sharing no tasks with the baseline are reported absent. Per-model
// shared-task means are floored at `mean_floor` before entering a ratio.
std::map<std::string, std::optional<double>> pairwise_relative(
    const ScoreTable& table, Metric metric, const std::string& baseline_model,
    bool eligible_only = false, const std::vector<TaskKey>* task_space = nullptr,
    double eligibility_threshold = 0.8, double mean_floor = 1e-9);

// Per-task model ranks rescaled to [0,1], 1 = best (lowest score), ties given
// the mean of the tied positions. Tasks with fewer than two models are omitted.
std::map<std::pair<std::string, TaskKey>, double> standardized_ranks(const ScoreTable& table,
                                                                     Metric metric);

// Mean score per (model, horizon); horizons a model never scored are absent.
std::map<std::pair<std::string, int>, double> horizon_breakdown(const ScoreTable& table,
                                                                Metric metric);

// Mean score and task count per model.
struct MeanScore {
    std::size_t n_tasks = 0;
    double mean = 0.0;
};
std::map<std::string, MeanScore> mean_scores(const ScoreTable& table, Metric metric);

}  // namespace hubcast
