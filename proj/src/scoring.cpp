#include "hubcast/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hubcast {

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Wis: return "wis";
        case Metric::LogWis: return "logwis";
        case Metric::Crps: return "crps";
        case Metric::LogCrps: return "logcrps";
        case Metric::LogScore: return "logscore";
        case Metric::Mae: return "mae";
        case Metric::Bias: return "bias";
        case Metric::Ci50Width: return "ci50_width";
    }
    return "unknown";
}

std::optional<Metric> metric_from_name(const std::string& name) {
    for (Metric m : {Metric::Wis, Metric::LogWis, Metric::Crps, Metric::LogCrps,
                     Metric::LogScore, Metric::Mae, Metric::Bias, Metric::Ci50Width}) {
        if (metric_name(m) == name) return m;
    }
    return std::nullopt;
}

bool metric_is_log_scale(Metric m) {
    return m == Metric::LogWis || m == Metric::LogCrps || m == Metric::LogScore;
}

double interval_score(double lower, double upper, double alpha, double y) {
    if (lower > upper) throw std::invalid_argument("inverted interval");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    double score = upper - lower;
    if (y < lower) score += (2.0 / alpha) * (lower - y);
    if (y > upper) score += (2.0 / alpha) * (y - upper);
    return score;
}

double wis(const QuantileForecast& forecast, double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite truth value");
    constexpr double w0 = 0.5;
    double total = w0 * std::abs(y - forecast.median());
    for (std::size_t k = 0; k < quantile_levels::kNumIntervals; ++k) {
        const double alpha = quantile_levels::kAlphas[k];
        total += (alpha / 2.0) *
                 interval_score(forecast.interval_lower(k), forecast.interval_upper(k), alpha, y);
    }
    return total / (static_cast<double>(quantile_levels::kNumIntervals) + 0.5);
}

double log_wis(const QuantileForecast& forecast, double y) {
    if (y < 0.0) throw std::invalid_argument("negative count");
    std::array<double, quantile_levels::kCount> transformed{};
    for (std::size_t i = 0; i < transformed.size(); ++i) {
        transformed[i] = std::log1p(forecast.value_at(i));
    }
    return wis(QuantileForecast(forecast.task(), transformed), std::log1p(y));
}

double crps_samples(const SampleForecast& forecast, double y) {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite truth value");
    std::vector<double> x = forecast.samples();
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());

    double abs_term = 0.0;
    for (double xi : x) abs_term += std::abs(xi - y);
    abs_term /= n;

    // sum_ij |x_i - x_j| = 2 * sum_i x_(i) * (2i - n + 1) over sorted samples.
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        pair_sum += x[i] * (2.0 * static_cast<double>(i) - n + 1.0);
    }
    return abs_term - pair_sum / (n * n);
}

double log_crps_samples(const SampleForecast& forecast, double y) {
    if (y < 0.0) throw std::invalid_argument("negative count");
    std::vector<double> transformed;
    transformed.reserve(forecast.samples().size());
    for (double s : forecast.samples()) {
        if (s < 0.0) throw std::invalid_argument("negative count");
        transformed.push_back(std::log1p(s));
    }
    return crps_samples(SampleForecast(forecast.task(), std::move(transformed)), std::log1p(y));
}

namespace {

double sample_quantile_sorted(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double silverman_bandwidth(const std::vector<double>& sorted) {
    const double n = static_cast<double>(sorted.size());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double iqr = sample_quantile_sorted(sorted, 0.75) - sample_quantile_sorted(sorted, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    return 0.9 * spread * std::pow(n, -0.2);
}

}  // namespace

double log_score_samples(const SampleForecast& forecast, double y,
                         const LogScoreOptions& options) {
    std::vector<double> x = forecast.samples();
    std::sort(x.begin(), x.end());

    double h = options.bandwidth.value_or(silverman_bandwidth(x));
    if (!(h > 0.0)) h = 1e-9;  // degenerate sample cloud

    // log f(y) via log-sum-exp so far-out observations underflow gracefully.
    const double n = static_cast<double>(x.size());
    double max_exponent = -std::numeric_limits<double>::infinity();
    std::vector<double> exponents;
    exponents.reserve(x.size());
    for (double xi : x) {
        const double z = (y - xi) / h;
        const double e = -0.5 * z * z;
        exponents.push_back(e);
        max_exponent = std::max(max_exponent, e);
    }
    double log_density;
    if (!std::isfinite(max_exponent)) {
        log_density = -std::numeric_limits<double>::infinity();
    } else {
        double acc = 0.0;
        for (double e : exponents) acc += std::exp(e - max_exponent);
        log_density = max_exponent + std::log(acc) - std::log(n * h) -
                      0.5 * std::log(2.0 * M_PI);
    }
    const double score = -log_density;
    return std::min(score, options.cap);
}

ForecastQuality forecast_quality(const QuantileForecast& forecast, double y) {
    ForecastQuality q;
    const double median = forecast.median();
    q.bias = median - y;
    q.under = median < y;
    q.over = median > y;
    q.ci50_width = forecast.interval_upper(6) - forecast.interval_lower(6);
    q.abs_err = std::abs(median - y);
    return q;
}

}  // namespace hubcast
