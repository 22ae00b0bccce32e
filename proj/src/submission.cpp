#include "hubcast/submission.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "hubcast/csv.hpp"

namespace hubcast {

namespace {

// Counts are usually integral: print them plainly, and otherwise use the
// shortest decimal that round-trips.
std::string format_value(double v) {
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

SubmissionReadResult parse_submission(const std::string& bytes, const std::string& model_id,
                                      const SubmissionReadOptions& options) {
    const CsvTable table = parse_csv(bytes);
    const std::size_t col_ref = table.column("reference_date");
    const std::size_t col_target = table.column("target");
    const std::size_t col_horizon = table.column("horizon");
    const std::size_t col_location = table.column("location");
    const std::size_t col_type = table.column("output_type");
    const std::size_t col_level = table.column("output_type_id");
    const std::size_t col_value = table.column("value");

    SubmissionReadResult result;
    result.file.model_id = model_id;

    // level index -> value, collected per task before building forecasts.
    std::map<TaskKey, std::map<int, std::pair<double, std::size_t>>> staged;

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t row_number = r + 2;  // 1-based, after the header
        const auto& row = table.rows[r];

        if (row[col_type] != "quantile") {
            throw CsvError(row_number, "unsupported output_type \"" + row[col_type] + "\"");
        }
        if (result.file.target.empty()) {
            result.file.target = row[col_target];
        } else if (row[col_target] != result.file.target) {
            throw CsvError(row_number, "mixed targets in one file (\"" + result.file.target +
                                           "\" vs \"" + row[col_target] + "\")");
        }

        int horizon = 0;
        try {
            std::size_t used = 0;
            horizon = std::stoi(row[col_horizon], &used);
            if (used != row[col_horizon].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw CsvError(row_number, "bad horizon \"" + row[col_horizon] + "\"");
        }
        if (horizon < kMinHorizon || horizon > kMaxHorizon) {
            if (options.allow_out_of_range_horizons) {
                ++result.skipped_rows;
                continue;
            }
            throw CsvError(row_number, "horizon " + std::to_string(horizon) + " outside 0..3");
        }

        const int level_index = quantile_levels::index_of(row[col_level]);
        if (level_index < 0) {
            throw CsvError(row_number, "non-canonical quantile level \"" + row[col_level] + "\"");
        }

        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(row[col_value], &used);
            if (used != row[col_value].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw CsvError(row_number, "bad value \"" + row[col_value] + "\"");
        }
        if (!std::isfinite(value) || value < 0.0) {
            throw CsvError(row_number, "value must be a finite non-negative number");
        }

        TaskKey task;
        try {
            task = TaskKey{Date::parse(row[col_ref]), row[col_location], horizon};
        } catch (const std::exception& e) {
            throw CsvError(row_number, e.what());
        }

        auto [it, inserted] =
            staged[task].emplace(level_index, std::make_pair(value, row_number));
        if (!inserted) {
            throw CsvError(row_number, "duplicate quantile level " + row[col_level] +
                                           " for task " + task.reference_date.to_string() + "/" +
                                           task.location + "/h" + std::to_string(task.horizon));
        }
    }

    for (const auto& [task, levels] : staged) {
        if (levels.size() != quantile_levels::kCount) {
            throw CsvError(levels.begin()->second.second,
                           "incomplete quantile set for task " + task.reference_date.to_string() +
                               "/" + task.location + "/h" + std::to_string(task.horizon) + " (" +
                               std::to_string(levels.size()) + " of 23 levels)");
        }
        std::array<double, quantile_levels::kCount> values{};
        double prev = -1.0;
        for (const auto& [index, value_row] : levels) {
            if (value_row.first < prev) {
                throw CsvError(value_row.second,
                               "crossing quantiles at level " +
                                   quantile_levels::strings()[static_cast<std::size_t>(index)]);
            }
            prev = value_row.first;
            values[static_cast<std::size_t>(index)] = value_row.first;
        }
        result.file.forecasts.emplace(task, QuantileForecast(task, values));
    }
    return result;
}

std::string emit_submission(const SubmissionFile& file) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(file.forecasts.size() * quantile_levels::kCount);
    for (const auto& [task, forecast] : file.forecasts) {
        for (std::size_t i = 0; i < quantile_levels::kCount; ++i) {
            rows.push_back({task.reference_date.to_string(), file.target,
                            std::to_string(task.horizon), task.location, "quantile",
                            quantile_levels::strings()[i], format_value(forecast.value_at(i))});
        }
    }
    return write_csv({"reference_date", "target", "horizon", "location", "output_type",
                      "output_type_id", "value"},
                     rows);
}

}  // namespace hubcast
