#pragma once

#include <cstdint>
#include <string>

namespace hubcast {

// Calendar date with integer-week arithmetic. Weekly epidemiological data is
// keyed by the Saturday that ends each epiweek; all date math here is plain
// day counting, no timezones.
class Date {
public:
    Date() = default;

    static Date from_ymd(int year, int month, int day);

    // Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
    static Date parse(const std::string& iso);

    static Date from_days(std::int64_t days) { return Date(days); }

    std::int64_t days_since_epoch() const { return days_; }

    int year() const;
    int month() const;
    int day() const;

    // 0 = Sunday ... 6 = Saturday.
    int weekday() const { return static_cast<int>(((days_ % 7) + 11) % 7); }
    bool is_saturday() const { return weekday() == 6; }

    Date plus_days(std::int64_t n) const { return Date(days_ + n); }
    Date plus_weeks(std::int64_t n) const { return Date(days_ + 7 * n); }

    // Epidemiological week of a Saturday-ending week: the week belongs to the
    // year containing its Wednesday, weeks within a year numbered from 1.
    int epiweek() const;
    int epiweek_year() const;

    std::string to_string() const;  // "YYYY-MM-DD"

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int64_t days) : days_(days) {}
    std::int64_t days_ = 0;
};

// Saturdays from first to last inclusive, weekly steps.
std::int64_t weeks_between(const Date& from, const Date& to);

}  // namespace hubcast
