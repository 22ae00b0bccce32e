#pragma once

#include <optional>
#include <string>

#include "hubcast/forecast.hpp"
#include "hubcast/task.hpp"

namespace hubcast {

enum class Metric { Wis, LogWis, Crps, LogCrps, LogScore, Mae, Bias, Ci50Width };

std::string metric_name(Metric m);
std::optional<Metric> metric_from_name(const std::string& name);

// True for metrics computed after the log1p transform or already on a log
// scale; drives report formatting.
bool metric_is_log_scale(Metric m);

struct ScoreRecord {
    std::string model_id;
    TaskKey task;
    Metric metric = Metric::Wis;
    double value = 0.0;
};

// Score of the central interval [lower, upper] at width alpha for truth y:
//   (upper - lower) + (2/alpha) * distance of y outside the interval.
// Throws on an inverted interval or alpha outside (0, 1).
double interval_score(double lower, double upper, double alpha, double y);

// Weighted interval score over the 23-quantile forecast: the median absolute
// error at weight 0.5 plus the 11 interval scores at weights alpha/2, the sum
// normalized by K + 0.5. Quantile approximation of CRPS.
double wis(const QuantileForecast& forecast, double y);

// WIS after transforming forecast quantiles and truth with log(1+x).
// Requires non-negative inputs (counts).
double log_wis(const QuantileForecast& forecast, double y);

// Empirical CRPS of a sample-based predictive distribution:
//   mean_i |x_i - y| - (1 / (2 N^2)) sum_ij |x_i - x_j|.
double crps_samples(const SampleForecast& forecast, double y);

// CRPS after the log(1+x) transform of samples and truth.
double log_crps_samples(const SampleForecast& forecast, double y);

struct LogScoreOptions {
    // Gaussian KDE bandwidth; unset -> Silverman's rule.
    std::optional<double> bandwidth;
    // Upper cap standing in for the infinite penalty of zero density.
    double cap = 500.0;
};

// Negative log of a Gaussian kernel density estimate at y, capped above.
double log_score_samples(const SampleForecast& forecast, double y,
                         const LogScoreOptions& options = {});

struct ForecastQuality {
    double bias = 0.0;        // median - y
    bool under = false;       // median < y
    bool over = false;        // median > y
    double ci50_width = 0.0;  // q0.75 - q0.25
    double abs_err = 0.0;     // |median - y|
};

ForecastQuality forecast_quality(const QuantileForecast& forecast, double y);

}  // namespace hubcast
