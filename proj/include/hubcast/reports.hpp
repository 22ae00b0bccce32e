#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hubcast/leaderboard.hpp"
#include "hubcast/scoring.hpp"
#include "hubcast/search.hpp"

namespace hubcast {

// Fixed-width decimal formatting: natural-scale scores get 2 places, log-scale
// scores and relative skill get 4, so report bytes are stable across runs.
std::string format_score(double value, Metric metric);
std::string format_relative(double value);

// Per-task score records: model_id,reference_date,location,horizon,metric,value.
std::string emit_scores_csv(const ScoreTable& table);

// Leaderboard sorted by relative score ascending (absent relatives last),
// then model id: model_id,n_tasks,mean_<metric>,relative_<metric>,eligible.
struct LeaderboardReportRow {
    std::string model_id;
    std::size_t n_tasks = 0;
    double mean_score = 0.0;
    std::optional<double> relative;
    bool eligible = false;
};
std::string emit_leaderboard_csv(const std::vector<LeaderboardReportRow>& rows, Metric metric);

// Standardized ranks per (model, task), task-major ordering.
std::string emit_ranks_csv(const std::map<std::pair<std::string, TaskKey>, double>& ranks);

// Mean score per model and horizon; absent horizons produce empty cells.
std::string emit_horizon_csv(const std::map<std::pair<std::string, int>, double>& breakdown,
                             Metric metric);

// Backtest summary: model,validation,test,selection score.
struct BacktestReportRow {
    std::string model_id;
    double validation_score = 0.0;
    double test_score = 0.0;
    double selection = 0.0;
};
std::string emit_backtest_csv(const std::vector<BacktestReportRow>& rows, Metric metric);

// Search trajectory: node_id,parent_id,score,cumulative_best,gate_passed,wall_ms.
std::string emit_trajectory_csv(const SearchResult& result);

}  // namespace hubcast
