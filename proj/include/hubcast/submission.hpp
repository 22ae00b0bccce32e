#pragma once

#include <map>
#include <string>
#include <vector>

#include "hubcast/forecast.hpp"
#include "hubcast/task.hpp"

namespace hubcast {

// Hub-format quantile submission: per task exactly 23 quantile rows, one per
// canonical level, monotone in the level.
struct SubmissionFile {
    std::string model_id;
    std::string target;  // opaque target string, one per file
    std::map<TaskKey, QuantileForecast> forecasts;
};

struct SubmissionReadOptions {
    // Rows whose horizon falls outside 0..3 (e.g. the hubs' -1 nowcasts) are
    // skipped rather than rejected; collected here for diagnostics.
    bool allow_out_of_range_horizons = true;
};

struct SubmissionReadResult {
    SubmissionFile file;
    std::size_t skipped_rows = 0;  // out-of-range horizons
};

// Parses and validates hub CSV bytes. Columns (any order):
//   reference_date,target,horizon,location,output_type,output_type_id,value
// Throws CsvError with the offending row number on: missing column, unknown
// output type, non-canonical quantile level, duplicate task/level rows,
// incomplete quantile sets, or crossing quantiles.
SubmissionReadResult parse_submission(const std::string& bytes, const std::string& model_id,
                                      const SubmissionReadOptions& options = {});

// Canonical serialization: fixed column order, tasks ordered by
// (reference_date, location, horizon), levels ascending, LF newlines. Output
// always re-parses to the same forecasts.
std::string emit_submission(const SubmissionFile& file);

}  // namespace hubcast
