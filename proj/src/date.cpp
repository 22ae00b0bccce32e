#include "hubcast/date.hpp"

#include <cstdio>
#include <stdexcept>

namespace hubcast {

namespace {

// Days between 1970-01-01 and y-m-d (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int n = len[m - 1];
    if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) n = 29;
    return d <= n;
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
    if (!valid_ymd(year, month, day)) {
        throw std::invalid_argument("invalid calendar date " + std::to_string(year) + "-" +
                                    std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(days_from_civil(year, month, day));
}

Date Date::parse(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3 ||
        iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
        throw std::invalid_argument("malformed date \"" + iso + "\" (want YYYY-MM-DD)");
    }
    return from_ymd(y, m, d);
}

int Date::year() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return y;
}

int Date::month() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return m;
}

int Date::day() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    return d;
}

int Date::epiweek() const {
    // Week-year membership follows the Wednesday of the Sun..Sat week.
    const std::int64_t wed = days_ + (3 - weekday());
    int y, m, d;
    civil_from_days(wed, y, m, d);
    const std::int64_t jan1 = days_from_civil(y, 1, 1);
    return static_cast<int>((wed - jan1) / 7) + 1;
}

int Date::epiweek_year() const {
    const std::int64_t wed = days_ + (3 - weekday());
    int y, m, d;
    civil_from_days(wed, y, m, d);
    return y;
}

std::string Date::to_string() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::int64_t weeks_between(const Date& from, const Date& to) {
    const std::int64_t diff = to.days_since_epoch() - from.days_since_epoch();
    if (diff % 7 != 0) {
        throw std::invalid_argument("dates " + from.to_string() + " and " + to.to_string() +
                                    " are not a whole number of weeks apart");
    }
    return diff / 7;
}

}  // namespace hubcast
