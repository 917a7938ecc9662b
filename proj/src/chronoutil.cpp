#include "etp/chronoutil.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace etp {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(const CivilDate& d) {
    int y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (month <= 2)), static_cast<int>(month),
                     static_cast<int>(day)};
}

TimePoint to_epoch(const CivilDateTime& dt) {
    return days_from_civil(dt.date) * kSecondsPerDay + dt.hour * 3600 + dt.minute * 60 +
           dt.second;
}

CivilDateTime from_epoch(TimePoint t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t rem = t % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    CivilDateTime dt;
    dt.date = civil_from_days(days);
    dt.hour = static_cast<int>(rem / 3600);
    dt.minute = static_cast<int>((rem % 3600) / 60);
    dt.second = static_cast<int>(rem % 60);
    return dt;
}

int day_of_year(const CivilDate& d) {
    return static_cast<int>(days_from_civil(d) - days_from_civil({d.year, 1, 1})) + 1;
}

namespace {

bool parse_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int value = 0;
    const auto* first = s.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len) return false;
    out = value;
    return true;
}

}  // namespace

std::optional<CivilDate> parse_date(std::string_view s) {
    CivilDate d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!parse_int(s, 0, 4, d.year) || !parse_int(s, 5, 2, d.month) ||
        !parse_int(s, 8, 2, d.day))
        return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
    return d;
}

std::optional<TimePoint> parse_iso8601(std::string_view s) {
    if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
    if (s.size() < 16) return std::nullopt;
    const auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    CivilDateTime dt;
    dt.date = *date;
    if (!parse_int(s, 11, 2, dt.hour) || s[13] != ':' || !parse_int(s, 14, 2, dt.minute))
        return std::nullopt;
    if (s.size() > 16) {
        if (s.size() != 19 || s[16] != ':' || !parse_int(s, 17, 2, dt.second))
            return std::nullopt;
    }
    if (dt.hour > 23 || dt.minute > 59 || dt.second > 60) return std::nullopt;
    return to_epoch(dt);
}

std::string format_iso8601(TimePoint t) {
    const CivilDateTime dt = from_epoch(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", dt.date.year,
                  dt.date.month, dt.date.day, dt.hour, dt.minute, dt.second);
    return buf;
}

std::string format_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

TimePoint to_local(TimePoint utc, double utc_offset_hours) {
    return utc + static_cast<TimePoint>(std::llround(utc_offset_hours * 3600.0));
}

}  // namespace etp
