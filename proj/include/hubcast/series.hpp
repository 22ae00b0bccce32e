#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hubcast/date.hpp"
#include "hubcast/task.hpp"

namespace hubcast {

enum class Provenance { Observed, Interpolated };

struct ObservationPoint {
    Date date;
    double value = 0.0;
    Provenance provenance = Provenance::Observed;
};

// Weekly target counts for one location. Dates strictly increasing with exact
// 7-day spacing; values finite and non-negative.
class ObservationSeries {
public:
    ObservationSeries() = default;
    ObservationSeries(std::string location, std::vector<ObservationPoint> points);

    const std::string& location() const { return location_; }
    const std::vector<ObservationPoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }

    std::optional<double> value_at(const Date& date) const;
    const ObservationPoint* point_at(const Date& date) const;

    // Latest point at or before the given date, if any.
    const ObservationPoint* latest_at_or_before(const Date& date) const;

    // Values of all points dated at or before the cutoff, oldest first.
    std::vector<double> values_through(const Date& cutoff) const;

private:
    std::string location_;
    std::vector<ObservationPoint> points_;
};

// Truth value for a task, or nullopt when the target week is not in the
// series. Absence makes the task unscorable; it is not an error.
std::optional<double> lookup_truth(const ObservationSeries& series, const TaskKey& task);

}  // namespace hubcast
