#include "hubcast/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hubcast {

ObservationSeries::ObservationSeries(std::string location, std::vector<ObservationPoint> points)
    : location_(std::move(location)), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.value) || p.value < 0.0) {
            throw std::invalid_argument("series " + location_ + ": bad value at " +
                                        p.date.to_string());
        }
        if (i > 0 && points_[i].date.days_since_epoch() -
                             points_[i - 1].date.days_since_epoch() != 7) {
            throw std::invalid_argument("series " + location_ + ": dates not on a 7-day grid near " +
                                        p.date.to_string());
        }
    }
}

const ObservationPoint* ObservationSeries::point_at(const Date& date) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), date,
                               [](const ObservationPoint& p, const Date& d) { return p.date < d; });
    if (it == points_.end() || it->date != date) return nullptr;
    return &*it;
}

std::optional<double> ObservationSeries::value_at(const Date& date) const {
    const ObservationPoint* p = point_at(date);
    if (!p) return std::nullopt;
    return p->value;
}

const ObservationPoint* ObservationSeries::latest_at_or_before(const Date& date) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), date,
                               [](const Date& d, const ObservationPoint& p) { return d < p.date; });
    if (it == points_.begin()) return nullptr;
    return &*(it - 1);
}

std::vector<double> ObservationSeries::values_through(const Date& cutoff) const {
    std::vector<double> out;
    for (const auto& p : points_) {
        if (p.date > cutoff) break;
        out.push_back(p.value);
    }
    return out;
}

std::optional<double> lookup_truth(const ObservationSeries& series, const TaskKey& task) {
    return series.value_at(task.target_end_date());
}

}  // namespace hubcast
