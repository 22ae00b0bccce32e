#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hubcast/csv.hpp"
#include "hubcast/forecasters.hpp"
#include "hubcast/submission.hpp"
#include "hubcast/task.hpp"

using namespace hubcast;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& bytes) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

class TempDir {
public:
    TempDir() {
        root_ = fs::temp_directory_path() /
                ("hubcast_cli_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter_++));
        fs::create_directories(root_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(root_, ec);
    }
    const fs::path& path() const { return root_; }

private:
    static inline int counter_ = 0;
    fs::path root_;
};

CliRun run_cli(const TempDir& dir, const std::string& args) {
    const fs::path out_file = dir.path() / "stdout.txt";
    const fs::path err_file = dir.path() / "stderr.txt";
    const std::string command = std::string(HUBCAST_CLI_PATH) + " " + args + " > " +
                                out_file.string() + " 2> " + err_file.string();
    const int raw = std::system(command.c_str());
    CliRun result;
    result.exit_code = WEXITSTATUS(raw);
    result.stdout_text = slurp(out_file);
    result.stderr_text = slurp(err_file);
    return result;
}

// --- synthetic season fixtures ----------------------------------------------

const Date kSeasonStart = Date::parse("2025-10-04");  // Saturday
constexpr int kSeasonWeeks = 30;

double truth_value(const std::string& location, int week) {
    const double base = location == "06" ? 40.0 : 90.0;
    return std::floor(base + 25.0 * std::sin(2.0 * M_PI * week / 26.0) + (week % 5));
}

std::string truth_csv() {
    std::ostringstream out;
    out << "date,location,value\n";
    for (const std::string& loc : {"06", "36"}) {
        for (int w = 0; w < kSeasonWeeks; ++w) {
            out << kSeasonStart.plus_weeks(w).to_string() << "," << loc << ","
                << truth_value(loc, w) << "\n";
        }
    }
    return out.str();
}

const std::string kLocationsCsv =
    "location,location_name,population\n"
    "06,California,39000000\n"
    "36,New York,19500000\n";

// Submission over 2 reference dates x 2 locations x 4 horizons. spread=0
// makes the oracle (truth point mass); larger spreads widen the intervals and
// shift the median by `bias`.
SubmissionFile make_submission(const std::string& model_id, double spread, double bias) {
    SubmissionFile file;
    file.model_id = model_id;
    file.target = "wk inc flu hosp";
    for (int origin : {20, 21}) {
        for (const std::string& loc : {"06", "36"}) {
            for (int h = 0; h <= 3; ++h) {
                const TaskKey task{kSeasonStart.plus_weeks(origin), loc, h};
                const double truth = truth_value(loc, origin + h);
                std::array<double, 23> values{};
                for (std::size_t i = 0; i < 23; ++i) {
                    const double offset =
                        spread * (static_cast<double>(i) - 11.0);
                    values[i] = std::max(0.0, truth + bias + offset);
                }
                file.forecasts.emplace(task, QuantileForecast(task, values));
            }
        }
    }
    return file;
}

struct Fixture {
    TempDir dir;
    fs::path truth;
    fs::path locations;
    fs::path submissions;

    Fixture() {
        truth = dir.path() / "truth.csv";
        locations = dir.path() / "locations.csv";
        submissions = dir.path() / "submissions";
        spit(truth, truth_csv());
        spit(locations, kLocationsCsv);
        fs::create_directories(submissions);
        spit(submissions / "oracle.csv", emit_submission(make_submission("oracle", 0.0, 0.0)));
        spit(submissions / "wide.csv", emit_submission(make_submission("wide", 2.0, 5.0)));
        spit(submissions / "wider.csv", emit_submission(make_submission("wider", 4.0, 12.0)));
    }

    std::string data_args() const {
        return "--targets " + truth.string() + " --locations " + locations.string();
    }
};

}  // namespace

TEST_CASE("validate accepts good files and reports bad ones by row") {
    Fixture fx;
    const auto good = run_cli(fx.dir, "validate " + (fx.submissions / "oracle.csv").string());
    CHECK(good.exit_code == 0);
    CHECK(good.stdout_text.find("ok ") == 0);

    // Corrupt the last task's top quantile so the level set crosses.
    std::string bytes = slurp(fx.submissions / "wide.csv");
    const auto pos = bytes.rfind(",quantile,0.99,");
    const auto line_end = bytes.find('\n', pos);
    bytes.replace(pos, line_end - pos, ",quantile,0.99,0");
    spit(fx.dir.path() / "bad.csv", bytes);

    const auto mixed = run_cli(fx.dir, "validate " + (fx.submissions / "oracle.csv").string() +
                                           " " + (fx.dir.path() / "bad.csv").string() + " " +
                                           (fx.submissions / "wide.csv").string());
    CHECK(mixed.exit_code == 2);
    // Two ok lines, one diagnostic.
    CHECK(std::count(mixed.stdout_text.begin(), mixed.stdout_text.end(), '\n') == 2);
    CHECK(mixed.stderr_text.find("bad.csv:") != std::string::npos);
}

TEST_CASE("score writes per-task records for the chosen metric") {
    Fixture fx;
    const fs::path out = fx.dir.path() / "out_score";
    const auto run = run_cli(fx.dir, "score " + fx.data_args() + " --submissions " +
                                         fx.submissions.string() + " --metric wis --out " +
                                         out.string());
    REQUIRE(run.exit_code == 0);
    const auto table = parse_csv(slurp(out / "scores.csv"));
    // 3 models x 2 dates x 2 locations x 4 horizons.
    CHECK(table.rows.size() == 48);
    // The oracle scores 0.00 on every task.
    std::size_t oracle_rows = 0;
    for (const auto& row : table.rows) {
        if (row[0] == "oracle") {
            ++oracle_rows;
            CHECK(row[5] == "0.00");
        }
    }
    CHECK(oracle_rows == 16);
}

TEST_CASE("leaderboard gives identical submissions matching relatives of one") {
    Fixture fx;
    // Two identical copies under different model ids.
    spit(fx.dir.path() / "twins" / "twin_a.csv",
         emit_submission(make_submission("twin_a", 1.0, 2.0)));
    spit(fx.dir.path() / "twins" / "twin_b.csv",
         emit_submission(make_submission("twin_b", 1.0, 2.0)));

    const fs::path out = fx.dir.path() / "out_lb";
    const auto run = run_cli(fx.dir, "leaderboard " + fx.data_args() + " --submissions " +
                                         (fx.dir.path() / "twins").string() +
                                         " --baseline twin_a --metric logwis --out " +
                                         out.string());
    REQUIRE(run.exit_code == 0);
    const auto table = parse_csv(slurp(out / "leaderboard.csv"));
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        CHECK(row[3] == "1.0000");
        CHECK(row[4] == "true");  // full coverage of the 16-task space
    }
}

TEST_CASE("oracle submission dominates ranks and the leaderboard") {
    Fixture fx;
    const fs::path out = fx.dir.path() / "out_ranks";
    const auto run = run_cli(fx.dir, "ranks " + fx.data_args() + " --submissions " +
                                         fx.submissions.string() + " --metric logwis --out " +
                                         out.string());
    REQUIRE(run.exit_code == 0);
    const auto ranks = parse_csv(slurp(out / "ranks.csv"));
    CHECK(ranks.rows.size() == 48);
    for (const auto& row : ranks.rows) {
        if (row[3] == "oracle") CHECK(row[4] == "1.0000");
    }

    const fs::path out_lb = fx.dir.path() / "out_lb2";
    const auto lb = run_cli(fx.dir, "leaderboard " + fx.data_args() + " --submissions " +
                                        fx.submissions.string() +
                                        " --baseline wide --metric wis --out " +
                                        out_lb.string());
    REQUIRE(lb.exit_code == 0);
    const auto table = parse_csv(slurp(out_lb / "leaderboard.csv"));
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0][0] == "oracle");  // best relative score first
    CHECK(table.rows[0][2] == "0.00");    // mean WIS of the oracle
}

TEST_CASE("leaderboard eligibility check rejects bad usage") {
    Fixture fx;
    // Missing --baseline is a usage error.
    const auto run = run_cli(fx.dir, "leaderboard " + fx.data_args() + " --submissions " +
                                         fx.submissions.string());
    CHECK(run.exit_code == 1);

    // Unknown metric is a usage error.
    const auto bad_metric = run_cli(fx.dir, "score " + fx.data_args() + " --submissions " +
                                                fx.submissions.string() + " --metric nope");
    CHECK(bad_metric.exit_code != 0);

    // Sample-only metric on quantile submissions is a data error.
    const auto crps = run_cli(fx.dir, "score " + fx.data_args() + " --submissions " +
                                          fx.submissions.string() + " --metric crps --out " +
                                          (fx.dir.path() / "o").string());
    CHECK(crps.exit_code == 2);
}

TEST_CASE("ensemble command reproduces identical members and passes validation") {
    Fixture fx;
    for (const char* name : {"m1.csv", "m2.csv", "m3.csv"}) {
        spit(fx.dir.path() / "members" / name,
             emit_submission(make_submission(fs::path(name).stem().string(), 1.0, 3.0)));
    }
    const fs::path out_file = fx.dir.path() / "ens.csv";
    const auto run = run_cli(fx.dir, "ensemble --submissions " +
                                         (fx.dir.path() / "members").string() +
                                         " --combiner mean --output " + out_file.string());
    REQUIRE(run.exit_code == 0);

    const auto member = parse_submission(slurp(fx.dir.path() / "members" / "m1.csv"), "m1");
    const auto combined = parse_submission(slurp(out_file), "ensemble");
    REQUIRE(combined.file.forecasts.size() == member.file.forecasts.size());
    for (const auto& [task, forecast] : combined.file.forecasts) {
        CHECK(forecast.values() == member.file.forecasts.at(task).values());
    }

    const auto check = run_cli(fx.dir, "validate " + out_file.string());
    CHECK(check.exit_code == 0);
}

TEST_CASE("backtest reports validation, test, and selection scores") {
    Fixture fx;
    const fs::path out = fx.dir.path() / "out_bt";
    const std::string validation = kSeasonStart.plus_weeks(12).to_string() + ":" +
                                   kSeasonStart.plus_weeks(16).to_string();
    const std::string test = kSeasonStart.plus_weeks(20).to_string() + ":" +
                             kSeasonStart.plus_weeks(24).to_string();
    const auto run = run_cli(
        fx.dir, "backtest " + fx.data_args() +
                    " --model flatline --model climatological:smoothing=0.1" +
                    " --model ar6_pooled:n_trajectories=500 --validation " + validation +
                    " --test " + test + " --metric wis --seed 7 --out " + out.string());
    REQUIRE(run.exit_code == 0);

    const auto table = parse_csv(slurp(out / "backtest.csv"));
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
        const double val = std::stod(row[1]);
        const double test_score = std::stod(row[2]);
        const double sel = std::stod(row[3]);
        CHECK(val > 0.0);
        CHECK(sel == doctest::Approx(val + 2.0 * test_score).epsilon(0.01));
    }
}

TEST_CASE("search respects the node budget and is reproducible") {
    Fixture fx;
    const std::string validation = kSeasonStart.plus_weeks(12).to_string() + ":" +
                                   kSeasonStart.plus_weeks(15).to_string();
    const std::string test = kSeasonStart.plus_weeks(20).to_string() + ":" +
                             kSeasonStart.plus_weeks(22).to_string();
    auto invoke = [&](const fs::path& out) {
        return run_cli(fx.dir,
                       "search " + fx.data_args() +
                           " --root climatological --validation " + validation + " --test " +
                           test + " --max-nodes 25 --metric wis --seed 11 --out " +
                           out.string());
    };
    const fs::path out1 = fx.dir.path() / "s1";
    const fs::path out2 = fx.dir.path() / "s2";
    REQUIRE(invoke(out1).exit_code == 0);
    REQUIRE(invoke(out2).exit_code == 0);

    const auto trajectory = parse_csv(slurp(out1 / "trajectory.csv"));
    CHECK(trajectory.rows.size() <= 25);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : trajectory.rows) {
        const double best = std::stod(row[3]);
        CHECK(best <= prev);
        prev = best;
    }

    // Determinism: reruns with the same seed agree on everything except the
    // wall-clock column.
    const auto t1 = parse_csv(slurp(out1 / "trajectory.csv"));
    const auto t2 = parse_csv(slurp(out2 / "trajectory.csv"));
    REQUIRE(t1.rows.size() == t2.rows.size());
    for (std::size_t r = 0; r < t1.rows.size(); ++r) {
        for (std::size_t c = 0; c + 1 < t1.header.size(); ++c) {  // skip wall_ms
            CHECK(t1.rows[r][c] == t2.rows[r][c]);
        }
    }
    CHECK(slurp(out1 / "best_config.txt") == slurp(out2 / "best_config.txt"));

    // The best config parses back.
    CHECK_NOTHROW(ForecasterConfig::from_key_values(slurp(out1 / "best_config.txt")));
}

TEST_CASE("usage and data errors surface as exit codes 1 and 2") {
    Fixture fx;
    CHECK(run_cli(fx.dir, "no-such-command").exit_code == 1);
    CHECK(run_cli(fx.dir, "score --targets missing.csv --locations " +
                              fx.locations.string() + " --submissions " +
                              fx.submissions.string())
              .exit_code == 1);  // ExistingFile check fails at parse time

    // Unknown location inside the data: a data error, not a crash.
    spit(fx.dir.path() / "bad_truth.csv", "date,location,value\n2025-10-04,99,5\n");
    const auto run = run_cli(fx.dir, "score --targets " +
                                         (fx.dir.path() / "bad_truth.csv").string() +
                                         " --locations " + fx.locations.string() +
                                         " --submissions " + fx.submissions.string() +
                                         " --out " + (fx.dir.path() / "o2").string());
    CHECK(run.exit_code == 2);
}
