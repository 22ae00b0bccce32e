#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hubcast/forecast.hpp"
#include "hubcast/location.hpp"
#include "hubcast/random.hpp"
#include "hubcast/series.hpp"
#include "hubcast/task.hpp"

namespace hubcast {

enum class ForecasterKind { Flatline, Climatological, Ar6Pooled };

std::string forecaster_kind_name(ForecasterKind kind);
std::optional<ForecasterKind> forecaster_kind_from_name(const std::string& name);

// Kind plus a flat parameter map; unknown keys are ignored by each model so a
// config can carry a superset during search mutation.
struct ForecasterConfig {
    ForecasterKind kind = ForecasterKind::Flatline;
    std::map<std::string, double> params;

    double param_or(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }

    // One "key=value" line per parameter plus the kind, deterministic order.
    std::string to_key_values() const;
    static ForecasterConfig from_key_values(const std::string& text);
};

// ---------------------------------------------------------------------------
// Flat-line persistence baseline: median pinned to the last observation,
// spread from cumulative sums of symmetrized historical one-week differences.
// history_diffs limits how many trailing differences feed the pool (0 = all).
QuantileForecast flatline_forecast(const ObservationSeries& series, const TaskKey& task,
                                   std::size_t history_diffs, std::size_t n_trajectories,
                                   Rng& rng);

// ---------------------------------------------------------------------------
// Climatological window model: empirical quantiles of historical counts whose
// week of year falls within +/- window_halfwidth of the target week, averaged
// with quantiles of the population-rate pool across all locations, then pulled
// toward zero by the smoothing fraction. min_year = 0 keeps all history.
QuantileForecast climatological_forecast(const std::vector<ObservationSeries>& history,
                                         const LocationTable& locations, const TaskKey& task,
                                         int window_halfwidth, std::size_t min_samples,
                                         double smoothing, int min_year = 0);

// ---------------------------------------------------------------------------
// Pooled AR(6) on fourth-root transformed counts: shared coefficients and
// intercept, per-location residual scale.
struct Ar6Fit {
    std::array<double, 6> coefficients{};  // lag 1 first
    double intercept = 0.0;
    std::map<std::string, double> location_sigma;
    double pooled_sigma = 0.0;
    double epsilon = 0.01;      // transform offset
    double sigma_floor = 1e-4;
};

double ar6_transform(double x, double epsilon);
double ar6_inverse_transform(double u, double epsilon);

// Least-squares fit of the pooled lag-6 regression. Throws "degenerate design
// matrix" when the pooled design is rank deficient.
Ar6Fit ar6_pooled_fit(const std::vector<ObservationSeries>& history, double epsilon,
                      double sigma_floor = 1e-4);

// Recursive simulation on the transformed scale with per-location Gaussian
// innovations; lag buffers shorter than six are padded with the intercept.
QuantileForecast ar6_pooled_forecast(const Ar6Fit& fit, const ObservationSeries& series,
                                     const TaskKey& task, std::size_t n_trajectories, Rng& rng);

// Deterministic recursion (zero-noise path) on the transformed scale; returns
// the transformed value at the target week.
double ar6_deterministic_recursion(const Ar6Fit& fit, const ObservationSeries& series,
                                   const TaskKey& task);

// ---------------------------------------------------------------------------
// Uniform interface for backtesting and search. Implementations derive one
// RNG stream per task from the seed, so forecasts do not depend on how tasks
// are batched.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::string name() const = 0;
    virtual QuantileForecast forecast(const std::vector<ObservationSeries>& history,
                                      const LocationTable& locations,
                                      const TaskKey& task) const = 0;
};

std::unique_ptr<Forecaster> make_forecaster(const ForecasterConfig& config,
                                            std::uint64_t seed);

}  // namespace hubcast
