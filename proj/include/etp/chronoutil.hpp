#pragma once

// Calendar and timestamp helpers. Timestamps are stored as seconds since the
// Unix epoch, UTC. Site-local time is UTC plus a fixed configured offset;
// no timezone database is involved.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace etp {

using TimePoint = std::int64_t;  // seconds since 1970-01-01T00:00:00Z

constexpr std::int64_t kSecondsPerHalfHour = 1800;
constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    auto operator<=>(const CivilDate&) const = default;
};

struct CivilDateTime {
    CivilDate date;
    int hour = 0;
    int minute = 0;
    int second = 0;
};

bool is_leap_year(int year);
int days_in_year(int year);

/// Days since the epoch for a civil date (negative before 1970).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

TimePoint to_epoch(const CivilDateTime& dt);
CivilDateTime from_epoch(TimePoint t);

/// Day of year, 1-based (1..366).
int day_of_year(const CivilDate& d);

/// Accepts "YYYY-MM-DD HH:MM[:SS]" or "YYYY-MM-DDTHH:MM[:SS]" with an
/// optional trailing 'Z'.
std::optional<TimePoint> parse_iso8601(std::string_view s);

/// "YYYY-MM-DDTHH:MM:SS"
std::string format_iso8601(TimePoint t);

/// "YYYY-MM-DD"
std::optional<CivilDate> parse_date(std::string_view s);
std::string format_date(const CivilDate& d);

/// Shift a UTC instant into site-local wall time expressed as a fake epoch
/// value, so the civil accessors above read local calendar fields.
TimePoint to_local(TimePoint utc, double utc_offset_hours);

}  // namespace etp
