// hubcast: scoring, leaderboards, ensembling, backtesting, and configuration
// search for hub-format probabilistic epidemic forecasts.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hubcast/backtest.hpp"
#include "hubcast/csv.hpp"
#include "hubcast/ensemble.hpp"
#include "hubcast/forecasters.hpp"
#include "hubcast/leaderboard.hpp"
#include "hubcast/reports.hpp"
#include "hubcast/scoring.hpp"
#include "hubcast/search.hpp"
#include "hubcast/submission.hpp"
#include "hubcast/target_data.hpp"

namespace fs = std::filesystem;
using namespace hubcast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
}

// Submission inputs may be individual files or directories of *.csv.
std::vector<fs::path> collect_submission_paths(const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths;
    for (const auto& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.path().extension() == ".csv") paths.push_back(entry.path());
            }
        } else {
            paths.push_back(p);
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no submission files found");
    return paths;
}

std::string model_id_from_path(const fs::path& path) { return path.stem().string(); }

Metric parse_metric(const std::string& name) {
    auto metric = metric_from_name(name);
    if (!metric) throw CLI::ValidationError("--metric", "unknown metric " + name);
    return *metric;
}

// "first:last" date-range pair; comma-separates multiple ranges.
std::vector<DateRange> parse_ranges(const std::string& text) {
    std::vector<DateRange> ranges;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw std::runtime_error("bad date range \"" + item + "\" (want FIRST:LAST)");
        }
        ranges.push_back(
            DateRange{Date::parse(item.substr(0, colon)), Date::parse(item.substr(colon + 1))});
    }
    if (ranges.empty()) throw std::runtime_error("empty date-range list");
    return ranges;
}

// "kind:key=value:key=value" forecaster spec.
ForecasterConfig parse_model_spec(const std::string& text) {
    ForecasterConfig config;
    std::istringstream in(text);
    std::string item;
    bool first = true;
    while (std::getline(in, item, ':')) {
        if (first) {
            auto kind = forecaster_kind_from_name(item);
            if (!kind) throw std::runtime_error("unknown forecaster kind \"" + item + "\"");
            config.kind = *kind;
            first = false;
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("bad model parameter \"" + item + "\" (want key=value)");
        }
        config.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    if (first) throw std::runtime_error("empty model spec");
    return config;
}

struct LoadedSubmissions {
    std::vector<SubmissionFile> files;
};

LoadedSubmissions load_submissions(const std::vector<std::string>& inputs) {
    LoadedSubmissions out;
    for (const fs::path& path : collect_submission_paths(inputs)) {
        auto result = parse_submission(read_file(path), model_id_from_path(path));
        if (result.skipped_rows > 0) {
            std::cerr << path.string() << ": skipped " << result.skipped_rows
                      << " rows with horizons outside 0..3\n";
        }
        out.files.push_back(std::move(result.file));
    }
    return out;
}

const ObservationSeries* find_series(const std::vector<ObservationSeries>& series,
                                     const std::string& location) {
    for (const auto& s : series) {
        if (s.location() == location) return &s;
    }
    return nullptr;
}

// Scores every forecast that has truth, for one metric.
ScoreTable score_submissions(const LoadedSubmissions& submissions,
                             const std::vector<ObservationSeries>& truth, Metric metric) {
    if (metric != Metric::Wis && metric != Metric::LogWis && metric != Metric::Mae) {
        throw std::runtime_error("metric " + metric_name(metric) +
                                 " needs sample forecasts; quantile submissions support "
                                 "wis, logwis, and mae");
    }
    ScoreTable table;
    for (const auto& file : submissions.files) {
        for (const auto& [task, forecast] : file.forecasts) {
            const ObservationSeries* series = find_series(truth, task.location);
            if (!series) continue;
            const auto y = lookup_truth(*series, task);
            if (!y) continue;
            double value = 0.0;
            switch (metric) {
                case Metric::Wis: value = wis(forecast, *y); break;
                case Metric::LogWis: value = log_wis(forecast, *y); break;
                default: value = forecast_quality(forecast, *y).abs_err; break;
            }
            table.add(ScoreRecord{file.model_id, task, metric, value});
        }
    }
    return table;
}

// Scorable task space: submitted reference dates x locations x horizons,
// restricted to tasks whose target week has truth.
std::vector<TaskKey> scorable_task_space(const LoadedSubmissions& submissions,
                                         const LocationTable& locations,
                                         const std::vector<ObservationSeries>& truth) {
    std::set<Date> dates;
    for (const auto& file : submissions.files) {
        for (const auto& [task, forecast] : file.forecasts) dates.insert(task.reference_date);
    }
    if (dates.empty()) throw std::runtime_error("no tasks in submissions");
    const std::vector<TaskKey> full = build_task_space(
        std::vector<Date>(dates.begin(), dates.end()), locations.all(), {0, 1, 2, 3});
    std::vector<TaskKey> scorable;
    for (const TaskKey& task : full) {
        const ObservationSeries* series = find_series(truth, task.location);
        if (series && lookup_truth(*series, task)) scorable.push_back(task);
    }
    if (scorable.empty()) throw std::runtime_error("no scorable tasks (no overlapping truth)");
    return scorable;
}

// --- subcommand payloads ----------------------------------------------------

int cmd_validate(const std::vector<std::string>& inputs) {
    bool all_ok = true;
    for (const fs::path& path : collect_submission_paths(inputs)) {
        try {
            auto result = parse_submission(read_file(path), model_id_from_path(path));
            std::cout << "ok " << path.string() << " (" << result.file.forecasts.size()
                      << " tasks";
            if (result.skipped_rows > 0) {
                std::cout << ", " << result.skipped_rows << " out-of-range horizon rows skipped";
            }
            std::cout << ")\n";
        } catch (const CsvError& e) {
            std::cerr << path.string() << ":" << e.row() << ": " << e.what() << "\n";
            all_ok = false;
        } catch (const std::exception& e) {
            std::cerr << path.string() << ": " << e.what() << "\n";
            all_ok = false;
        }
    }
    return all_ok ? kExitOk : kExitData;
}

struct CommonData {
    LocationTable locations;
    std::vector<ObservationSeries> truth;
};

CommonData load_common(const std::string& locations_path, const std::string& targets_path) {
    CommonData data;
    data.locations = load_locations(read_file(locations_path));
    data.truth = load_target_series(read_file(targets_path), data.locations);
    return data;
}

int cmd_score(const CommonData& data, const std::vector<std::string>& submissions,
              Metric metric, const fs::path& out_dir) {
    const auto loaded = load_submissions(submissions);
    const ScoreTable table = score_submissions(loaded, data.truth, metric);
    write_file(out_dir / "scores.csv", emit_scores_csv(table));
    std::cout << "wrote " << (out_dir / "scores.csv").string() << " (" << table.size()
              << " records)\n";
    return kExitOk;
}

int cmd_leaderboard(const CommonData& data, const std::vector<std::string>& submissions,
                    Metric metric, double threshold, const std::string& baseline,
                    const fs::path& out_dir) {
    const auto loaded = load_submissions(submissions);
    const ScoreTable table = score_submissions(loaded, data.truth, metric);
    const auto space = scorable_task_space(loaded, data.locations, data.truth);
    const auto eligible = eligibility(table, space, threshold, metric);
    const auto relative = pairwise_relative(table, metric, baseline);
    const auto means = mean_scores(table, metric);

    std::vector<LeaderboardReportRow> rows;
    for (const auto& [model, mean] : means) {
        LeaderboardReportRow row;
        row.model_id = model;
        row.n_tasks = mean.n_tasks;
        row.mean_score = mean.mean;
        auto rel = relative.find(model);
        if (rel != relative.end()) row.relative = rel->second;
        row.eligible = eligible.at(model);
        rows.push_back(std::move(row));
    }
    write_file(out_dir / "leaderboard.csv", emit_leaderboard_csv(rows, metric));
    std::cout << "wrote " << (out_dir / "leaderboard.csv").string() << " (" << rows.size()
              << " models, cutoff " << eligibility_cutoff(space.size(), threshold) << " of "
              << space.size() << " tasks)\n";
    return kExitOk;
}

int cmd_ranks(const CommonData& data, const std::vector<std::string>& submissions, Metric metric,
              const fs::path& out_dir) {
    const auto loaded = load_submissions(submissions);
    const ScoreTable table = score_submissions(loaded, data.truth, metric);
    const auto ranks = standardized_ranks(table, metric);
    write_file(out_dir / "ranks.csv", emit_ranks_csv(ranks));
    const auto horizon = horizon_breakdown(table, metric);
    write_file(out_dir / "horizon_means.csv", emit_horizon_csv(horizon, metric));
    std::cout << "wrote " << (out_dir / "ranks.csv").string() << " and "
              << (out_dir / "horizon_means.csv").string() << "\n";
    return kExitOk;
}

int cmd_ensemble(const std::vector<std::string>& submissions,
                 const std::vector<std::string>& members, const std::string& combiner_name,
                 bool skip_missing, std::size_t min_members, const std::string& ensemble_id,
                 const fs::path& out_path) {
    const auto loaded = load_submissions(submissions);

    EnsembleSpec spec;
    if (members.empty()) {
        for (const auto& file : loaded.files) spec.members.push_back(file.model_id);
    } else {
        spec.members = members;
    }
    if (combiner_name == "mean") {
        spec.combiner = Combiner::MeanPerQuantile;
    } else if (combiner_name == "median") {
        spec.combiner = Combiner::MedianPerQuantile;
    } else {
        throw std::runtime_error("unknown combiner \"" + combiner_name + "\"");
    }
    spec.skip_if_missing = skip_missing;
    spec.min_members = min_members;

    std::set<TaskKey> tasks;
    std::string target;
    for (const auto& file : loaded.files) {
        if (target.empty()) target = file.target;
        for (const auto& [task, forecast] : file.forecasts) tasks.insert(task);
    }

    SubmissionFile out;
    out.model_id = ensemble_id;
    out.target = target;
    for (const TaskKey& task : tasks) {
        std::map<std::string, QuantileForecast> member_forecasts;
        for (const auto& file : loaded.files) {
            auto it = file.forecasts.find(task);
            if (it != file.forecasts.end()) member_forecasts.emplace(file.model_id, it->second);
        }
        try {
            out.forecasts.emplace(task, combine(spec, member_forecasts));
        } catch (const std::invalid_argument&) {
            if (!skip_missing) throw;
            // Not enough members for this task; leave it out.
        }
    }
    if (out.forecasts.empty()) throw std::runtime_error("ensemble produced no tasks");
    write_file(out_path, emit_submission(out));
    std::cout << "wrote " << out_path.string() << " (" << out.forecasts.size() << " tasks)\n";
    return kExitOk;
}

int cmd_backtest(const CommonData& data, const std::vector<std::string>& model_specs,
                 const std::string& validation_text, const std::string& test_text, Metric metric,
                 std::uint64_t seed, const fs::path& out_dir) {
    EvaluationSplit split;
    split.validation = parse_ranges(validation_text);
    const auto test_ranges = parse_ranges(test_text);
    if (test_ranges.size() != 1) throw std::runtime_error("test block must be a single range");
    split.retrospective_test = test_ranges.front();
    split.check();

    RollingScoreOptions options;
    options.metric = metric;

    std::vector<BacktestReportRow> rows;
    for (const auto& spec_text : model_specs) {
        const ForecasterConfig config = parse_model_spec(spec_text);
        const auto forecaster = make_forecaster(config, seed);
        BacktestReportRow row;
        row.model_id = forecaster->name();
        row.validation_score =
            rolling_validation_score(*forecaster, data.truth, data.locations, split, options);
        row.test_score = rolling_origin_score(*forecaster, data.truth, data.locations,
                                              {split.retrospective_test}, options);
        row.selection = selection_score(row.validation_score, row.test_score);
        rows.push_back(row);
    }
    write_file(out_dir / "backtest.csv", emit_backtest_csv(rows, metric));
    std::cout << "wrote " << (out_dir / "backtest.csv").string() << " (" << rows.size()
              << " models)\n";
    return kExitOk;
}

int cmd_search(const CommonData& data, const std::string& root_spec,
               const std::string& validation_text, const std::string& test_text, Metric metric,
               std::size_t max_nodes, double max_runtime_sec, double exploration,
               double gate_penalty, std::uint64_t seed, const fs::path& out_dir) {
    EvaluationSplit split;
    split.validation = parse_ranges(validation_text);
    const auto test_ranges = parse_ranges(test_text);
    if (test_ranges.size() != 1) throw std::runtime_error("test block must be a single range");
    split.retrospective_test = test_ranges.front();
    split.check();

    RollingScoreOptions options;
    options.metric = metric;
    options.warn_unscorable = false;

    SearchCallbacks callbacks;
    callbacks.evaluate = [&](const ForecasterConfig& config) {
        const auto forecaster = make_forecaster(config, seed);
        return rolling_validation_score(*forecaster, data.truth, data.locations, split, options);
    };

    Budget budget;
    budget.max_nodes = max_nodes;
    budget.max_runtime = std::chrono::duration<double>(max_runtime_sec);

    SearchOptions search_options;
    search_options.exploration_constant = exploration;
    search_options.gate_penalty = gate_penalty;
    search_options.seed = seed;

    const SearchResult result =
        run_search(parse_model_spec(root_spec), callbacks, budget, search_options);

    const int final_id = select_final_node(result.tree, [&](const ForecasterConfig& config) {
        const auto forecaster = make_forecaster(config, seed);
        return rolling_origin_score(*forecaster, data.truth, data.locations,
                                    {split.retrospective_test}, options);
    });

    write_file(out_dir / "trajectory.csv", emit_trajectory_csv(result));
    write_file(out_dir / "best_config.txt", result.tree.at(final_id).config.to_key_values());
    std::cout << "explored " << result.tree.size() << " nodes; best validation node "
              << result.best_node_id << "; selected node " << final_id << " (selection score)\n"
              << "wrote " << (out_dir / "trajectory.csv").string() << " and "
              << (out_dir / "best_config.txt").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forecast-hub evaluation and ensembling toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config");

    std::string metric_name_flag = "logwis";
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    app.add_option("--metric", metric_name_flag,
                   "scoring metric: wis|logwis|crps|logcrps|logscore")
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed; fixed seed makes runs deterministic")
        ->capture_default_str();

    std::string targets_path, locations_path, baseline;
    std::vector<std::string> submission_inputs;
    double threshold = 0.8;

    auto add_data_options = [&](CLI::App* cmd) {
        cmd->add_option("--targets", targets_path, "target-data CSV (date,location,value)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--locations", locations_path,
                        "location table CSV (location,location_name,population)")
            ->required()
            ->check(CLI::ExistingFile);
    };
    auto add_submission_options = [&](CLI::App* cmd) {
        cmd->add_option("--submissions", submission_inputs,
                        "submission CSV files or directories")
            ->required()
            ->check(CLI::ExistingPath);
    };

    CLI::App* validate = app.add_subcommand("validate", "validate submission files");
    std::vector<std::string> validate_inputs;
    validate->add_option("files", validate_inputs, "submission CSV files or directories")
        ->required()
        ->check(CLI::ExistingPath);

    CLI::App* score = app.add_subcommand("score", "per-task scores for each model");
    add_data_options(score);
    add_submission_options(score);

    CLI::App* leaderboard =
        app.add_subcommand("leaderboard", "mean scores, pairwise relative skill, eligibility");
    add_data_options(leaderboard);
    add_submission_options(leaderboard);
    leaderboard->add_option("--threshold", threshold, "eligibility coverage threshold")
        ->capture_default_str();
    leaderboard->add_option("--baseline", baseline, "model whose relative score is scaled to 1")
        ->required();

    CLI::App* ranks = app.add_subcommand("ranks", "standardized ranks and horizon means");
    add_data_options(ranks);
    add_submission_options(ranks);

    CLI::App* ensemble = app.add_subcommand("ensemble", "combine member submissions");
    add_submission_options(ensemble);
    std::vector<std::string> members;
    std::string combiner = "mean", ensemble_id = "ensemble", ensemble_out = "ensemble.csv";
    bool skip_missing = false;
    std::size_t min_members = 1;
    ensemble->add_option("--members", members, "member model ids (default: all)");
    ensemble->add_option("--combiner", combiner, "mean|median")->capture_default_str();
    ensemble->add_flag("--skip-missing", skip_missing,
                       "combine tasks where some members are absent");
    ensemble->add_option("--min-members", min_members, "minimum members per task")
        ->capture_default_str();
    ensemble->add_option("--model-id", ensemble_id, "model id of the output")
        ->capture_default_str();
    ensemble->add_option("--output", ensemble_out, "output submission path")
        ->capture_default_str();

    CLI::App* backtest =
        app.add_subcommand("backtest", "rolling-origin validation/test scores per model");
    add_data_options(backtest);
    std::vector<std::string> model_specs;
    std::string validation_text, test_text;
    backtest->add_option("--model", model_specs,
                         "forecaster spec kind[:key=value...], repeatable")
        ->required();
    backtest->add_option("--validation", validation_text,
                         "validation origin ranges FIRST:LAST[,FIRST:LAST...]")
        ->required();
    backtest->add_option("--test", test_text, "retrospective test range FIRST:LAST")->required();

    CLI::App* search = app.add_subcommand("search", "budgeted PUCT configuration search");
    add_data_options(search);
    std::string root_spec = "flatline";
    std::size_t max_nodes = 100;
    double max_runtime_sec = 3600.0, exploration = 1.0, gate_penalty = 1000.0;
    search->add_option("--root", root_spec, "root forecaster spec")->capture_default_str();
    search->add_option("--validation", validation_text,
                       "validation origin ranges FIRST:LAST[,FIRST:LAST...]")
        ->required();
    search->add_option("--test", test_text, "retrospective test range FIRST:LAST")->required();
    search->add_option("--max-nodes", max_nodes, "node budget")->capture_default_str();
    search->add_option("--max-runtime-sec", max_runtime_sec, "evaluator wall-clock budget")
        ->capture_default_str();
    search->add_option("--exploration", exploration, "PUCT exploration constant")
        ->capture_default_str();
    search->add_option("--gate-penalty", gate_penalty, "score assigned to gated nodes")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Metric metric = parse_metric(metric_name_flag);
        if (validate->parsed()) return cmd_validate(validate_inputs);
        if (score->parsed()) {
            return cmd_score(load_common(locations_path, targets_path), submission_inputs,
                             metric, out_dir);
        }
        if (leaderboard->parsed()) {
            return cmd_leaderboard(load_common(locations_path, targets_path), submission_inputs,
                                   metric, threshold, baseline, out_dir);
        }
        if (ranks->parsed()) {
            return cmd_ranks(load_common(locations_path, targets_path), submission_inputs,
                             metric, out_dir);
        }
        if (ensemble->parsed()) {
            return cmd_ensemble(submission_inputs, members, combiner, skip_missing, min_members,
                                ensemble_id, ensemble_out);
        }
        if (backtest->parsed()) {
            return cmd_backtest(load_common(locations_path, targets_path), model_specs,
                                validation_text, test_text, metric, seed, out_dir);
        }
        if (search->parsed()) {
            return cmd_search(load_common(locations_path, targets_path), root_spec,
                              validation_text, test_text, metric, max_nodes, max_runtime_sec,
                              exploration, gate_penalty, seed, out_dir);
        }
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CsvError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::runtime_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
