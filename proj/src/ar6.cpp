#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hubcast/forecasters.hpp"
#include "hubcast/stats.hpp"

namespace hubcast {

double ar6_transform(double x, double epsilon) { return std::pow(x + epsilon, 0.25); }

double ar6_inverse_transform(double u, double epsilon) {
    const double v = std::max(u, 0.0);
    return v * v * v * v - epsilon;
}

namespace {

constexpr std::size_t kArOrder = 6;

std::array<double, quantile_levels::kCount> constant_values(double v) {
    std::array<double, quantile_levels::kCount> out{};
    out.fill(std::max(v, 0.0));
    return out;
}

// Lag buffer holding the most recent transformed values, oldest first; short
// histories are padded at the old end with the shared intercept.
std::vector<double> lag_buffer(const Ar6Fit& fit, const ObservationSeries& series,
                               const Date& cutoff) {
    std::vector<double> u;
    for (double x : series.values_through(cutoff)) {
        u.push_back(ar6_transform(x, fit.epsilon));
    }
    std::vector<double> buf;
    if (u.size() >= kArOrder) {
        buf.assign(u.end() - kArOrder, u.end());
    } else {
        buf.assign(kArOrder - u.size(), fit.intercept);
        buf.insert(buf.end(), u.begin(), u.end());
    }
    return buf;
}

double ar6_step(const Ar6Fit& fit, const std::vector<double>& buf) {
    double next = fit.intercept;
    for (std::size_t k = 0; k < kArOrder; ++k) {
        next += fit.coefficients[k] * buf[buf.size() - 1 - k];
    }
    return next;
}

}  // namespace

double ar6_deterministic_recursion(const Ar6Fit& fit, const ObservationSeries& series,
                                   const TaskKey& task) {
    const ObservationPoint* last = series.latest_at_or_before(task.reference_date);
    const Date anchor_date = last ? last->date : task.reference_date;
    const std::int64_t steps = weeks_between(anchor_date, task.target_end_date());
    std::vector<double> buf = lag_buffer(fit, series, task.reference_date);
    for (std::int64_t s = 0; s < steps; ++s) {
        buf.push_back(ar6_step(fit, buf));
        buf.erase(buf.begin());
    }
    return buf.back();
}

Ar6Fit ar6_pooled_fit(const std::vector<ObservationSeries>& history, double epsilon,
                      double sigma_floor) {
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    Ar6Fit fit;
    fit.epsilon = epsilon;
    fit.sigma_floor = sigma_floor;

    struct Row {
        std::array<double, kArOrder> lags;
        double target;
        std::size_t series_index;
    };
    std::vector<Row> rows;
    for (std::size_t si = 0; si < history.size(); ++si) {
        const auto& points = history[si].points();
        std::vector<double> u;
        u.reserve(points.size());
        for (const auto& p : points) u.push_back(ar6_transform(p.value, epsilon));
        for (std::size_t t = kArOrder; t < u.size(); ++t) {
            Row row;
            for (std::size_t k = 0; k < kArOrder; ++k) row.lags[k] = u[t - 1 - k];
            row.target = u[t];
            row.series_index = si;
            rows.push_back(row);
        }
    }
    if (rows.size() < kArOrder + 1) {
        throw std::invalid_argument("degenerate design matrix");
    }

    Eigen::MatrixXd design(rows.size(), kArOrder + 1);
    Eigen::VectorXd target(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t k = 0; k < kArOrder; ++k) design(r, k) = rows[r].lags[k];
        design(r, kArOrder) = 1.0;
        target(r) = rows[r].target;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(kArOrder + 1)) {
        throw std::invalid_argument("degenerate design matrix");
    }
    const Eigen::VectorXd beta = qr.solve(target);
    for (std::size_t k = 0; k < kArOrder; ++k) fit.coefficients[k] = beta(k);
    fit.intercept = beta(kArOrder);

    // Residual scale per location; pooled scale is the fallback.
    std::map<std::size_t, std::pair<double, std::size_t>> per_series;
    double pooled_ss = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double pred = fit.intercept;
        for (std::size_t k = 0; k < kArOrder; ++k) pred += fit.coefficients[k] * rows[r].lags[k];
        const double res = rows[r].target - pred;
        pooled_ss += res * res;
        auto& slot = per_series[rows[r].series_index];
        slot.first += res * res;
        slot.second += 1;
    }
    fit.pooled_sigma =
        std::max(std::sqrt(pooled_ss / static_cast<double>(rows.size())), sigma_floor);
    for (std::size_t si = 0; si < history.size(); ++si) {
        auto it = per_series.find(si);
        double sigma = fit.pooled_sigma;
        if (it != per_series.end()) {
            sigma = std::max(std::sqrt(it->second.first / static_cast<double>(it->second.second)),
                             sigma_floor);
        }
        fit.location_sigma[history[si].location()] = sigma;
    }
    return fit;
}

QuantileForecast ar6_pooled_forecast(const Ar6Fit& fit, const ObservationSeries& series,
                                     const TaskKey& task, std::size_t n_trajectories, Rng& rng) {
    const ObservationPoint* last = series.latest_at_or_before(task.reference_date);
    const Date anchor_date = last ? last->date : task.reference_date;
    const std::int64_t steps = weeks_between(anchor_date, task.target_end_date());
    const std::vector<double> buf0 = lag_buffer(fit, series, task.reference_date);

    if (steps <= 0) {
        const auto observed = series.value_at(task.target_end_date());
        const double u = observed ? ar6_transform(*observed, fit.epsilon) : buf0.back();
        return QuantileForecast(task, constant_values(ar6_inverse_transform(u, fit.epsilon)));
    }

    auto sigma_it = fit.location_sigma.find(series.location());
    const double sigma =
        sigma_it != fit.location_sigma.end() ? sigma_it->second : fit.pooled_sigma;

    std::vector<double> endpoints;
    endpoints.reserve(n_trajectories);
    std::vector<double> buf;
    for (std::size_t t = 0; t < n_trajectories; ++t) {
        buf = buf0;
        for (std::int64_t s = 0; s < steps; ++s) {
            buf.push_back(ar6_step(fit, buf) + sigma * rng.normal());
            buf.erase(buf.begin());
        }
        endpoints.push_back(buf.back());
    }

    auto transformed_q = empirical_quantiles_23(std::move(endpoints));
    std::array<double, quantile_levels::kCount> values{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = ar6_inverse_transform(transformed_q[i], fit.epsilon);
    }
    for (double& v : values) v = std::max(v, 0.0);
    std::sort(values.begin(), values.end());
    return QuantileForecast(task, values);
}

}  // namespace hubcast
