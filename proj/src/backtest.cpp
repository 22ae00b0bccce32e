#include "hubcast/backtest.hpp"

#include <iostream>
#include <stdexcept>

namespace hubcast {

std::vector<Date> DateRange::saturdays() const {
    if (last < first) throw std::invalid_argument("date range ends before it starts");
    std::vector<Date> out;
    Date d = first;
    while (d.weekday() != 6) d = d.plus_days(1);
    for (; d <= last; d = d.plus_weeks(1)) out.push_back(d);
    return out;
}

void EvaluationSplit::check() const {
    std::vector<DateRange> all = validation;
    all.push_back(retrospective_test);
    if (prospective) all.push_back(*prospective);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const bool disjoint = all[i].last < all[j].first || all[j].last < all[i].first;
            if (!disjoint) {
                throw std::invalid_argument("evaluation split ranges overlap: " +
                                            all[i].first.to_string() + ".." +
                                            all[i].last.to_string() + " vs " +
                                            all[j].first.to_string() + ".." +
                                            all[j].last.to_string());
            }
        }
    }
}

namespace {

double score_one(Metric metric, const QuantileForecast& forecast, double truth) {
    switch (metric) {
        case Metric::Wis: return wis(forecast, truth);
        case Metric::LogWis: return log_wis(forecast, truth);
        case Metric::Mae: return forecast_quality(forecast, truth).abs_err;
        default:
            throw std::invalid_argument("metric " + metric_name(metric) +
                                        " is not defined for quantile forecasts");
    }
}

}  // namespace

double rolling_origin_score(const Forecaster& forecaster,
                            const std::vector<ObservationSeries>& data,
                            const LocationTable& locations,
                            const std::vector<DateRange>& origin_ranges,
                            const RollingScoreOptions& options) {
    if (origin_ranges.empty()) throw std::invalid_argument("no origin ranges");

    double total = 0.0;
    std::size_t n_scored = 0;
    for (const DateRange& range : origin_ranges) {
        for (const Date& origin : range.saturdays()) {
            // The forecaster only sees history up to the origin.
            std::vector<ObservationSeries> visible;
            visible.reserve(data.size());
            for (const auto& s : data) {
                std::vector<ObservationPoint> pts;
                for (const auto& p : s.points()) {
                    if (p.date <= origin) pts.push_back(p);
                }
                if (!pts.empty()) visible.emplace_back(s.location(), std::move(pts));
            }

            std::size_t scored_at_origin = 0;
            for (const auto& series : data) {
                for (int h : options.horizons) {
                    const TaskKey task{origin, series.location(), h};
                    const auto truth = lookup_truth(series, task);
                    if (!truth) continue;
                    const QuantileForecast forecast =
                        forecaster.forecast(visible, locations, task);
                    total += score_one(options.metric, forecast, *truth);
                    ++n_scored;
                    ++scored_at_origin;
                }
            }
            if (scored_at_origin == 0 && options.warn_unscorable) {
                std::cerr << "warning: origin " << origin.to_string()
                          << " has no scorable tasks; omitted\n";
            }
        }
    }
    if (n_scored == 0) {
        throw std::runtime_error("no scorable tasks in any origin");
    }
    return total / static_cast<double>(n_scored);
}

double rolling_validation_score(const Forecaster& forecaster,
                                const std::vector<ObservationSeries>& data,
                                const LocationTable& locations, const EvaluationSplit& split,
                                const RollingScoreOptions& options) {
    if (split.validation.empty()) throw std::invalid_argument("empty validation block");
    return rolling_origin_score(forecaster, data, locations, split.validation, options);
}

double selection_score(double validation_wis, double test_wis) {
    if (validation_wis < 0.0 || test_wis < 0.0) {
        throw std::invalid_argument("selection score inputs must be non-negative");
    }
    return validation_wis + 2.0 * test_wis;
}

}  // namespace hubcast
