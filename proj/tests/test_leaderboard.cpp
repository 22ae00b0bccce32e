#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hubcast/leaderboard.hpp"
#include "hubcast/random.hpp"

using namespace hubcast;

namespace {

TaskKey task_n(int i, int horizon = 0) {
    return TaskKey{Date::parse("2026-01-03").plus_weeks(i), "06", horizon};
}

ScoreRecord rec(const std::string& model, const TaskKey& task, double value,
                Metric metric = Metric::Wis) {
    return ScoreRecord{model, task, metric, value};
}

}  // namespace

TEST_CASE("score table rejects duplicate keys") {
    ScoreTable table;
    table.add(rec("a", task_n(0), 1.0));
    CHECK_THROWS_AS(table.add(rec("a", task_n(0), 2.0)), std::invalid_argument);
    table.add(rec("a", task_n(0), 2.0, Metric::LogWis));  // different metric is fine
    CHECK(table.value("a", task_n(0), Metric::Wis) == 1.0);
    CHECK(!table.value("b", task_n(0), Metric::Wis).has_value());
}

TEST_CASE("eligibility cutoffs reproduce the hub arithmetic") {
    CHECK(eligibility_cutoff(4680, 0.8) == 3744);
    CHECK(eligibility_cutoff(3432, 0.8) == 2745);
    CHECK(eligibility_cutoff(4056, 0.8) == 3244);
    CHECK(eligibility_cutoff(10, 1.0) == 10);
    CHECK_THROWS_AS(eligibility_cutoff(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eligibility_cutoff(10, 1.5), std::invalid_argument);
}

TEST_CASE("eligibility counts coverage inside the declared space") {
    std::vector<TaskKey> space;
    for (int i = 0; i < 10; ++i) space.push_back(task_n(i));

    ScoreTable table;
    for (int i = 0; i < 8; ++i) table.add(rec("full", task_n(i), 1.0));
    for (int i = 0; i < 7; ++i) table.add(rec("partial", task_n(i), 1.0));
    // Tasks outside the declared space do not count.
    table.add(rec("partial", task_n(99), 1.0));

    const auto flags = eligibility(table, space, 0.8, Metric::Wis);
    CHECK(flags.at("full"));
    CHECK(!flags.at("partial"));

    // Monotone in coverage: adding a scored task never revokes eligibility.
    ScoreTable more = table;
    more.add(rec("partial", task_n(7), 1.0));
    CHECK(eligibility(more, space, 0.8, Metric::Wis).at("partial"));

    CHECK_THROWS_AS(eligibility(table, {}, 0.8, Metric::Wis), std::invalid_argument);
}

TEST_CASE("pairwise relative on the three-model hand case") {
    ScoreTable table;
    table.add(rec("a", task_n(0), 1.0));
    table.add(rec("b", task_n(0), 2.0));
    table.add(rec("c", task_n(0), 4.0));

    const auto rel = pairwise_relative(table, Metric::Wis, "b");
    CHECK(*rel.at("a") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*rel.at("b") == 1.0);
    CHECK(*rel.at("c") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pairwise relative: identical models score one") {
    ScoreTable table;
    for (int i = 0; i < 5; ++i) {
        table.add(rec("a", task_n(i), 3.0 + i));
        table.add(rec("b", task_n(i), 3.0 + i));
    }
    const auto rel = pairwise_relative(table, Metric::Wis, "a");
    CHECK(*rel.at("a") == 1.0);
    CHECK(*rel.at("b") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pairwise relative is invariant to global scaling and shared-task drops") {
    Rng rng(5);
    ScoreTable base;
    for (int i = 0; i < 12; ++i) {
        base.add(rec("a", task_n(i), 1.0 + rng.uniform()));
        base.add(rec("b", task_n(i), 1.0 + rng.uniform()));
        if (i < 9) base.add(rec("c", task_n(i), 1.0 + rng.uniform()));
    }
    const auto rel = pairwise_relative(base, Metric::Wis, "a");

    ScoreTable scaled;
    for (const auto& [key, value] : base.records()) {
        scaled.add(ScoreRecord{std::get<0>(key), std::get<1>(key), std::get<2>(key),
                               value * 7.5});
    }
    const auto rel_scaled = pairwise_relative(scaled, Metric::Wis, "a");
    for (const auto& [model, value] : rel) {
        CHECK(*rel_scaled.at(model) == doctest::Approx(*value).epsilon(1e-12));
    }

    // A task scored by nobody else cannot change any ratio.
    ScoreTable extra = base;
    extra.add(rec("d", task_n(50), 9.0));
    extra.add(rec("a", task_n(51), 2.0));  // shared with no one
    const auto rel_extra = pairwise_relative(extra, Metric::Wis, "a");
    CHECK(*rel_extra.at("b") == doctest::Approx(*rel.at("b")).epsilon(1e-12));
}

TEST_CASE("pairwise relative with eligible_only drops under-covered models") {
    std::vector<TaskKey> space;
    for (int i = 0; i < 10; ++i) space.push_back(task_n(i));

    ScoreTable table;
    for (int i = 0; i < 10; ++i) {
        table.add(rec("base", task_n(i), 2.0));
        table.add(rec("full", task_n(i), 1.0));
    }
    table.add(rec("sparse", task_n(0), 4.0));  // 10% coverage

    const auto all = pairwise_relative(table, Metric::Wis, "base");
    CHECK(all.count("sparse") == 1);

    const auto gated =
        pairwise_relative(table, Metric::Wis, "base", /*eligible_only=*/true, &space, 0.8);
    CHECK(gated.count("sparse") == 0);
    CHECK(gated.count("full") == 1);
    // Dropping the sparse opponent changes the opponent set, not the scale.
    CHECK(*gated.at("base") == 1.0);
}

TEST_CASE("pairwise relative reports absent for models disjoint from the baseline") {
    ScoreTable table;
    table.add(rec("base", task_n(0), 1.0));
    table.add(rec("other", task_n(0), 2.0));
    table.add(rec("loner", task_n(5), 2.0));

    const auto rel = pairwise_relative(table, Metric::Wis, "base");
    CHECK(rel.at("base").has_value());
    CHECK(rel.at("other").has_value());
    CHECK(!rel.at("loner").has_value());

    CHECK_THROWS_AS(pairwise_relative(table, Metric::Wis, "missing"), std::invalid_argument);
}

TEST_CASE("zero shared means are floored, not poisonous") {
    ScoreTable table;
    table.add(rec("oracle", task_n(0), 0.0));
    table.add(rec("other", task_n(0), 2.0));
    const auto rel = pairwise_relative(table, Metric::Wis, "other");
    CHECK(*rel.at("oracle") > 0.0);
    CHECK(*rel.at("oracle") < 1e-6);
}

TEST_CASE("standardized ranks rescale to [0,1] with 1 best") {
    ScoreTable table;
    table.add(rec("a", task_n(0), 1.0));
    table.add(rec("b", task_n(0), 2.0));
    table.add(rec("c", task_n(0), 3.0));

    const auto ranks = standardized_ranks(table, Metric::Wis);
    CHECK(ranks.at({"a", task_n(0)}) == 1.0);
    CHECK(ranks.at({"b", task_n(0)}) == 0.5);
    CHECK(ranks.at({"c", task_n(0)}) == 0.0);
}

TEST_CASE("standardized ranks tie handling matches the mean of tied positions") {
    ScoreTable table;
    table.add(rec("a", task_n(0), 1.0));
    table.add(rec("b", task_n(0), 1.0));
    table.add(rec("c", task_n(0), 3.0));
    const auto ranks = standardized_ranks(table, Metric::Wis);
    CHECK(ranks.at({"a", task_n(0)}) == doctest::Approx(0.75));
    CHECK(ranks.at({"b", task_n(0)}) == doctest::Approx(0.75));
    CHECK(ranks.at({"c", task_n(0)}) == doctest::Approx(0.0));
}

TEST_CASE("standardized ranks without ties form an evenly spaced permutation") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(6));
        ScoreTable table;
        for (int m = 0; m < n; ++m) {
            table.add(rec("m" + std::to_string(m), task_n(0), rng.uniform()));
        }
        const auto ranks = standardized_ranks(table, Metric::Wis);
        std::vector<double> values;
        for (const auto& [key, v] : ranks) values.push_back(v);
        std::sort(values.begin(), values.end());
        REQUIRE(values.size() == static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            CHECK(values[i] ==
                  doctest::Approx(static_cast<double>(i) / (n - 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("single-model tasks are omitted from ranks") {
    ScoreTable table;
    table.add(rec("a", task_n(0), 1.0));
    CHECK(standardized_ranks(table, Metric::Wis).empty());
}

TEST_CASE("horizon breakdown equals a brute-force group-by mean") {
    Rng rng(29);
    ScoreTable table;
    std::map<std::pair<std::string, int>, std::vector<double>> groups;
    for (int i = 0; i < 30; ++i) {
        for (int h = 0; h <= 2; ++h) {
            const double v = 10.0 * rng.uniform();
            table.add(rec("a", task_n(i, h), v));
            groups[{"a", h}].push_back(v);
        }
    }
    const auto breakdown = horizon_breakdown(table, Metric::Wis);
    for (const auto& [key, values] : groups) {
        double sum = 0.0;
        for (double v : values) sum += v;
        CHECK(breakdown.at(key) == doctest::Approx(sum / values.size()).epsilon(1e-12));
    }
    // Horizon 3 was never scored: absent, not zero.
    CHECK(breakdown.find({"a", 3}) == breakdown.end());

    // Constant scores give the constant at every horizon.
    ScoreTable constant;
    for (int h = 0; h <= 3; ++h) constant.add(rec("c", task_n(0, h), 4.2));
    const auto cb = horizon_breakdown(constant, Metric::Wis);
    for (int h = 0; h <= 3; ++h) CHECK(cb.at({"c", h}) == doctest::Approx(4.2));
}
