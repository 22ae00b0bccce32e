#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hubcast/date.hpp"
#include "hubcast/forecasters.hpp"
#include "hubcast/location.hpp"
#include "hubcast/scoring.hpp"
#include "hubcast/series.hpp"

namespace hubcast {

// Closed date range of Saturdays, inclusive on both ends.
struct DateRange {
    Date first;
    Date last;

    bool contains(const Date& d) const { return d >= first && d <= last; }
    // Saturdays of the range, weekly steps.
    std::vector<Date> saturdays() const;
};

// Non-overlapping evaluation blocks: validation drives the search, the
// retrospective test block drives post-search node selection, and the
// optional prospective block is never touched by either.
struct EvaluationSplit {
    std::vector<DateRange> validation;
    DateRange retrospective_test;
    std::optional<DateRange> prospective;

    // Throws when any two blocks overlap.
    void check() const;
};

struct RollingScoreOptions {
    Metric metric = Metric::Wis;
    std::vector<int> horizons = {0, 1, 2, 3};
    bool warn_unscorable = true;
};

// Mean per-task score of the forecaster across every (origin, location,
// horizon) in the given ranges, origins advancing weekly. History visible to
// the forecaster is truncated at each origin. Tasks without truth are
// omitted; it is an error if nothing is scorable.
double rolling_origin_score(const Forecaster& forecaster,
                            const std::vector<ObservationSeries>& data,
                            const LocationTable& locations,
                            const std::vector<DateRange>& origin_ranges,
                            const RollingScoreOptions& options);

// Convenience wrapper over the validation block of a split.
double rolling_validation_score(const Forecaster& forecaster,
                                const std::vector<ObservationSeries>& data,
                                const LocationTable& locations, const EvaluationSplit& split,
                                const RollingScoreOptions& options);

// Two-stage selection score: validation + 2 x retrospective test.
double selection_score(double validation_wis, double test_wis);

}  // namespace hubcast
