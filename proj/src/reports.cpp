#include "hubcast/reports.hpp"

#include <algorithm>
#include <cstdio>

#include "hubcast/csv.hpp"

namespace hubcast {

namespace {

std::string fixed(double value, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, value);
    return buf;
}

}  // namespace

std::string format_score(double value, Metric metric) {
    return fixed(value, metric_is_log_scale(metric) ? 4 : 2);
}

std::string format_relative(double value) { return fixed(value, 4); }

std::string emit_scores_csv(const ScoreTable& table) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(table.size());
    for (const auto& [key, value] : table.records()) {
        const auto& [model, task, metric] = key;
        rows.push_back({model, task.reference_date.to_string(), task.location,
                        std::to_string(task.horizon), metric_name(metric),
                        format_score(value, metric)});
    }
    return write_csv({"model_id", "reference_date", "location", "horizon", "metric", "value"},
                     rows);
}

std::string emit_leaderboard_csv(const std::vector<LeaderboardReportRow>& rows, Metric metric) {
    std::vector<LeaderboardReportRow> ordered = rows;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.relative.has_value() != b.relative.has_value()) return a.relative.has_value();
        if (a.relative && b.relative && *a.relative != *b.relative) {
            return *a.relative < *b.relative;
        }
        return a.model_id < b.model_id;
    });

    std::vector<std::vector<std::string>> out;
    out.reserve(ordered.size());
    for (const auto& row : ordered) {
        out.push_back({row.model_id, std::to_string(row.n_tasks),
                       format_score(row.mean_score, metric),
                       row.relative ? format_relative(*row.relative) : "",
                       row.eligible ? "true" : "false"});
    }
    const std::string mean_col = "mean_" + metric_name(metric);
    const std::string rel_col = "relative_" + metric_name(metric);
    return write_csv({"model_id", "n_tasks", mean_col, rel_col, "eligible"}, out);
}

std::string emit_ranks_csv(const std::map<std::pair<std::string, TaskKey>, double>& ranks) {
    // Task-major ordering so per-task fields group together.
    std::vector<std::pair<std::pair<TaskKey, std::string>, double>> ordered;
    ordered.reserve(ranks.size());
    for (const auto& [key, value] : ranks) {
        ordered.push_back({{key.second, key.first}, value});
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::vector<std::string>> rows;
    rows.reserve(ordered.size());
    for (const auto& [key, value] : ordered) {
        const auto& [task, model] = key;
        rows.push_back({task.reference_date.to_string(), task.location,
                        std::to_string(task.horizon), model, format_relative(value)});
    }
    return write_csv({"reference_date", "location", "horizon", "model_id", "standardized_rank"},
                     rows);
}

std::string emit_horizon_csv(const std::map<std::pair<std::string, int>, double>& breakdown,
                             Metric metric) {
    std::vector<std::string> models;
    for (const auto& [key, value] : breakdown) {
        if (models.empty() || models.back() != key.first) models.push_back(key.first);
    }

    std::vector<std::vector<std::string>> rows;
    for (const std::string& model : models) {
        std::vector<std::string> row{model};
        for (int h = kMinHorizon; h <= kMaxHorizon; ++h) {
            auto it = breakdown.find({model, h});
            row.push_back(it == breakdown.end() ? "" : format_score(it->second, metric));
        }
        rows.push_back(std::move(row));
    }
    return write_csv({"model_id", "horizon_0", "horizon_1", "horizon_2", "horizon_3"}, rows);
}

std::string emit_backtest_csv(const std::vector<BacktestReportRow>& rows, Metric metric) {
    std::vector<BacktestReportRow> ordered = rows;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.selection != b.selection) return a.selection < b.selection;
        return a.model_id < b.model_id;
    });
    std::vector<std::vector<std::string>> out;
    out.reserve(ordered.size());
    for (const auto& row : ordered) {
        out.push_back({row.model_id, format_score(row.validation_score, metric),
                       format_score(row.test_score, metric),
                       format_score(row.selection, metric)});
    }
    const std::string suffix = "_" + metric_name(metric);
    return write_csv(
        {"model_id", "validation" + suffix, "test" + suffix, "selection_score"}, out);
}

std::string emit_trajectory_csv(const SearchResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.tree.size());
    for (std::size_t i = 0; i < result.tree.size(); ++i) {
        const SearchNode& node = result.tree.nodes()[i];
        const TrajectoryPoint& point = result.trajectory[i];
        rows.push_back({std::to_string(node.id),
                        node.parent ? std::to_string(*node.parent) : "",
                        fixed(node.score, 6), fixed(point.cumulative_best, 6),
                        node.gate_passed ? "true" : "false", fixed(node.wall_ms, 3)});
    }
    return write_csv(
        {"node_id", "parent_id", "score", "cumulative_best", "gate_passed", "wall_ms"}, rows);
}

}  // namespace hubcast
