#include "hubcast/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "hubcast/stats.hpp"

namespace hubcast {

std::string forecaster_kind_name(ForecasterKind kind) {
    switch (kind) {
        case ForecasterKind::Flatline: return "flatline";
        case ForecasterKind::Climatological: return "climatological";
        case ForecasterKind::Ar6Pooled: return "ar6_pooled";
    }
    return "unknown";
}

std::optional<ForecasterKind> forecaster_kind_from_name(const std::string& name) {
    for (ForecasterKind k : {ForecasterKind::Flatline, ForecasterKind::Climatological,
                             ForecasterKind::Ar6Pooled}) {
        if (forecaster_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string ForecasterConfig::to_key_values() const {
    std::ostringstream out;
    out << "kind=" << forecaster_kind_name(kind) << "\n";
    out.precision(17);
    for (const auto& [key, value] : params) {
        out << key << "=" << value << "\n";
    }
    return out.str();
}

ForecasterConfig ForecasterConfig::from_key_values(const std::string& text) {
    ForecasterConfig config;
    bool have_kind = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line missing '=': " + line);
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "kind") {
            auto kind = forecaster_kind_from_name(value);
            if (!kind) throw std::invalid_argument("unknown forecaster kind " + value);
            config.kind = *kind;
            have_kind = true;
        } else {
            config.params[key] = std::stod(value);
        }
    }
    if (!have_kind) throw std::invalid_argument("forecaster config lacks a kind");
    return config;
}

namespace {

std::array<double, quantile_levels::kCount> clamp_and_sort(
    std::array<double, quantile_levels::kCount> values) {
    for (double& v : values) v = std::max(v, 0.0);
    std::sort(values.begin(), values.end());
    return values;
}

std::array<double, quantile_levels::kCount> constant_values(double v) {
    std::array<double, quantile_levels::kCount> out{};
    out.fill(std::max(v, 0.0));
    return out;
}

// Circular week-of-year distance; week 53 wraps onto week 1.
int week_distance(int a, int b) {
    int d = std::abs(a - b) % 52;
    return std::min(d, 52 - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// Flat-line baseline

QuantileForecast flatline_forecast(const ObservationSeries& series, const TaskKey& task,
                                   std::size_t history_diffs, std::size_t n_trajectories,
                                   Rng& rng) {
    std::vector<double> values = series.values_through(task.reference_date);
    if (values.size() < 2) {
        throw std::invalid_argument("flatline: need >=2 observations at or before " +
                                    task.reference_date.to_string());
    }
    const ObservationPoint* last = series.latest_at_or_before(task.reference_date);
    const double anchor = last->value;

    const Date target = task.target_end_date();
    const std::int64_t steps = weeks_between(last->date, target);
    if (steps <= 0) {
        // Target week already observed (or is the anchor week itself).
        const double v = series.value_at(target).value_or(anchor);
        return QuantileForecast(task, constant_values(v));
    }

    std::vector<double> diff_pool;
    diff_pool.reserve(2 * (values.size() - 1));
    std::size_t first = 1;
    if (history_diffs > 0 && values.size() - 1 > history_diffs) {
        first = values.size() - history_diffs;
    }
    for (std::size_t i = first; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        diff_pool.push_back(d);
        diff_pool.push_back(-d);
    }

    std::vector<double> endpoints;
    endpoints.reserve(n_trajectories);
    for (std::size_t t = 0; t < n_trajectories; ++t) {
        double cum = 0.0;
        for (std::int64_t s = 0; s < steps; ++s) {
            cum += diff_pool[rng.uniform_index(diff_pool.size())];
        }
        endpoints.push_back(anchor + cum);
    }

    auto quantiles = empirical_quantiles_23(std::move(endpoints));
    // Re-center so the median is exactly the last observation.
    const double shift = anchor - quantiles[quantile_levels::kMedianIndex];
    for (double& q : quantiles) q += shift;
    return QuantileForecast(task, clamp_and_sort(quantiles));
}

// ---------------------------------------------------------------------------
// Climatological window model

QuantileForecast climatological_forecast(const std::vector<ObservationSeries>& history,
                                         const LocationTable& locations, const TaskKey& task,
                                         int window_halfwidth, std::size_t min_samples,
                                         double smoothing, int min_year) {
    if (window_halfwidth < 0) throw std::invalid_argument("negative window halfwidth");
    if (!(smoothing >= 0.0 && smoothing <= 1.0)) {
        throw std::invalid_argument("smoothing outside [0,1]");
    }
    const int target_week = task.target_end_date().epiweek();
    const double target_population =
        static_cast<double>(locations.at(task.location).population);

    auto in_window = [&](const ObservationPoint& p) {
        if (p.date > task.reference_date) return false;  // no future leakage
        if (min_year > 0 && p.date.year() < min_year) return false;
        return week_distance(p.date.epiweek(), target_week) <= window_halfwidth;
    };

    std::vector<double> specific_pool;
    std::vector<double> rate_pool;
    for (const ObservationSeries& series : history) {
        const double population = static_cast<double>(locations.at(series.location()).population);
        for (const ObservationPoint& p : series.points()) {
            if (!in_window(p)) continue;
            if (series.location() == task.location) specific_pool.push_back(p.value);
            rate_pool.push_back(p.value / population * 1e5);
        }
    }

    std::optional<std::array<double, quantile_levels::kCount>> specific_q;
    if (specific_pool.size() >= min_samples && !specific_pool.empty()) {
        specific_q = empirical_quantiles_23(std::move(specific_pool));
    }
    std::optional<std::array<double, quantile_levels::kCount>> aggregated_q;
    if (rate_pool.size() >= min_samples && !rate_pool.empty()) {
        aggregated_q = empirical_quantiles_23(std::move(rate_pool));
        for (double& q : *aggregated_q) q = q * target_population / 1e5;
    }

    std::array<double, quantile_levels::kCount> final_q{};
    if (specific_q && aggregated_q) {
        for (std::size_t i = 0; i < final_q.size(); ++i) {
            final_q[i] = 0.5 * ((*specific_q)[i] + (*aggregated_q)[i]);
        }
    } else if (specific_q) {
        final_q = *specific_q;
    } else if (aggregated_q) {
        final_q = *aggregated_q;
    } else {
        std::cerr << "warning: climatological forecast for " << task.location << " @ "
                  << task.reference_date.to_string()
                  << " has no historical samples; emitting zeros\n";
        final_q.fill(0.0);
    }

    for (double& q : final_q) q *= (1.0 - smoothing);
    return QuantileForecast(task, clamp_and_sort(final_q));
}

// ---------------------------------------------------------------------------
// Forecaster interface

namespace {

std::uint64_t task_seed(std::uint64_t base, const TaskKey& task) {
    std::uint64_t h = 1469598103934665603ULL ^ base;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(task.reference_date.days_since_epoch()));
    for (char c : task.location) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    mix(static_cast<std::uint64_t>(task.horizon));
    return h;
}

const ObservationSeries& series_for(const std::vector<ObservationSeries>& history,
                                    const std::string& location) {
    for (const auto& s : history) {
        if (s.location() == location) return s;
    }
    throw std::out_of_range("no observation series for location " + location);
}

class FlatlineForecaster final : public Forecaster {
public:
    FlatlineForecaster(const ForecasterConfig& config, std::uint64_t seed)
        : history_diffs_(static_cast<std::size_t>(config.param_or("history_diffs", 0))),
          n_trajectories_(static_cast<std::size_t>(config.param_or("n_trajectories", 10000))),
          seed_(seed) {}

    std::string name() const override { return "flatline"; }

    QuantileForecast forecast(const std::vector<ObservationSeries>& history,
                              const LocationTable&, const TaskKey& task) const override {
        Rng rng(task_seed(seed_, task));
        return flatline_forecast(series_for(history, task.location), task, history_diffs_,
                                 n_trajectories_, rng);
    }

private:
    std::size_t history_diffs_;
    std::size_t n_trajectories_;
    std::uint64_t seed_;
};

class ClimatologicalForecaster final : public Forecaster {
public:
    explicit ClimatologicalForecaster(const ForecasterConfig& config)
        : window_halfwidth_(static_cast<int>(config.param_or("window_halfwidth", 3))),
          min_samples_(static_cast<std::size_t>(config.param_or("min_samples", 5))),
          smoothing_(config.param_or("smoothing", 0.0)),
          min_year_(static_cast<int>(config.param_or("min_year", 0))) {}

    std::string name() const override { return "climatological"; }

    QuantileForecast forecast(const std::vector<ObservationSeries>& history,
                              const LocationTable& locations,
                              const TaskKey& task) const override {
        return climatological_forecast(history, locations, task, window_halfwidth_,
                                       min_samples_, smoothing_, min_year_);
    }

private:
    int window_halfwidth_;
    std::size_t min_samples_;
    double smoothing_;
    int min_year_;
};

class Ar6PooledForecaster final : public Forecaster {
public:
    Ar6PooledForecaster(const ForecasterConfig& config, std::uint64_t seed)
        : epsilon_(config.param_or("epsilon", 0.01)),
          sigma_floor_(config.param_or("epsilon_std", 1e-4)),
          n_trajectories_(static_cast<std::size_t>(config.param_or("n_trajectories", 2000))),
          seed_(seed) {}

    std::string name() const override { return "ar6_pooled"; }

    QuantileForecast forecast(const std::vector<ObservationSeries>& history,
                              const LocationTable&, const TaskKey& task) const override {
        // Refit per reference date so rolling origins never see the future.
        const auto& fit = fit_for(history, task.reference_date);
        Rng rng(task_seed(seed_, task));
        return ar6_pooled_forecast(fit, series_for(history, task.location), task,
                                   n_trajectories_, rng);
    }

private:
    // Cache one fit per reference date; guarded so tasks may be forecast in
    // parallel against a shared forecaster.
    const Ar6Fit& fit_for(const std::vector<ObservationSeries>& history,
                          const Date& cutoff) const {
        const auto key = cutoff.days_since_epoch();
        std::lock_guard<std::mutex> lock(fit_mutex_);
        auto it = fits_.find(key);
        if (it == fits_.end()) {
            std::vector<ObservationSeries> truncated;
            truncated.reserve(history.size());
            for (const auto& s : history) {
                std::vector<ObservationPoint> pts;
                for (const auto& p : s.points()) {
                    if (p.date <= cutoff) pts.push_back(p);
                }
                if (!pts.empty()) truncated.emplace_back(s.location(), std::move(pts));
            }
            it = fits_.emplace(key, ar6_pooled_fit(truncated, epsilon_, sigma_floor_)).first;
        }
        return it->second;
    }

    double epsilon_;
    double sigma_floor_;
    std::size_t n_trajectories_;
    std::uint64_t seed_;
    mutable std::mutex fit_mutex_;
    mutable std::map<std::int64_t, Ar6Fit> fits_;
};

}  // namespace

std::unique_ptr<Forecaster> make_forecaster(const ForecasterConfig& config, std::uint64_t seed) {
    switch (config.kind) {
        case ForecasterKind::Flatline:
            return std::make_unique<FlatlineForecaster>(config, seed);
        case ForecasterKind::Climatological:
            return std::make_unique<ClimatologicalForecaster>(config);
        case ForecasterKind::Ar6Pooled:
            return std::make_unique<Ar6PooledForecaster>(config, seed);
    }
    throw std::invalid_argument("unknown forecaster kind");
}

}  // namespace hubcast
