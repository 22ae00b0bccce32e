#include "hubcast/target_data.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include "hubcast/csv.hpp"

namespace hubcast {

LocationTable load_locations(const std::string& bytes) {
    const CsvTable table = parse_csv(bytes);
    const std::size_t col_code = table.column("location");
    const std::size_t col_name = table.column("location_name");
    const std::size_t col_pop = table.column("population");

    std::vector<Location> locations;
    locations.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        char* end = nullptr;
        const long long pop = std::strtoll(row[col_pop].c_str(), &end, 10);
        if (end == row[col_pop].c_str() || *end != '\0' || pop <= 0) {
            throw CsvError(r + 2, "bad population \"" + row[col_pop] + "\"");
        }
        locations.push_back(Location{row[col_code], row[col_name], pop});
    }
    try {
        return LocationTable(std::move(locations));
    } catch (const std::exception& e) {
        throw CsvError(0, e.what());
    }
}

namespace {

std::optional<double> parse_numeric(const std::string& text) {
    if (text.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::vector<ObservationSeries> load_target_series(const std::string& bytes,
                                                  const LocationTable& locations) {
    const CsvTable table = parse_csv(bytes);
    const std::size_t col_date = table.column("date");
    const std::size_t col_location = table.column("location");
    const std::size_t col_value = table.column("value");

    // Observed values per location, keyed by date; non-numeric cells count as
    // missing per the cleaning rule.
    std::map<std::string, std::map<std::int64_t, double>> observed;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (!locations.contains(row[col_location])) {
            throw CsvError(r + 2, "unknown location code \"" + row[col_location] + "\"");
        }
        Date date;
        try {
            date = Date::parse(row[col_date]);
        } catch (const std::exception& e) {
            throw CsvError(r + 2, e.what());
        }
        const auto value = parse_numeric(row[col_value]);
        if (!value) continue;  // cleaned
        if (*value < 0.0) throw CsvError(r + 2, "negative count");
        observed[row[col_location]][date.days_since_epoch()] = *value;
    }

    std::vector<ObservationSeries> out;
    out.reserve(locations.size());
    for (const Location& loc : locations.all()) {
        auto it = observed.find(loc.code);
        if (it == observed.end() || it->second.empty()) {
            std::cerr << "warning: no observations for location " << loc.code << "\n";
            out.emplace_back(loc.code, std::vector<ObservationPoint>{});
            continue;
        }
        const auto& by_date = it->second;
        const std::int64_t first = by_date.begin()->first;
        const std::int64_t last = by_date.rbegin()->first;
        for (const auto& [d, v] : by_date) {
            if ((d - first) % 7 != 0) {
                throw CsvError(0, "location " + loc.code + ": date " +
                                      Date::from_days(d).to_string() +
                                      " is off the weekly grid");
            }
        }

        std::vector<ObservationPoint> points;
        auto prev = by_date.begin();
        for (std::int64_t d = first; d <= last; d += 7) {
            auto found = by_date.find(d);
            if (found != by_date.end()) {
                points.push_back({Date::from_days(d), found->second, Provenance::Observed});
                prev = found;
            } else {
                // Interpolate between the nearest observed neighbors.
                auto next = by_date.upper_bound(d);
                const double span = static_cast<double>(next->first - prev->first);
                const double frac = static_cast<double>(d - prev->first) / span;
                const double v = prev->second + frac * (next->second - prev->second);
                points.push_back({Date::from_days(d), v, Provenance::Interpolated});
            }
        }
        out.emplace_back(loc.code, std::move(points));
    }
    return out;
}

}  // namespace hubcast
