#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cryptofactor {

/// Seconds since the Unix epoch. All timestamps in the engine are UTC.
using TimePoint = std::int64_t;

inline constexpr TimePoint kSecondsPerHour = 3600;
inline constexpr TimePoint kSecondsPerDay = 86400;
inline constexpr TimePoint kSecondsPerWeek = 7 * kSecondsPerDay;

/// Calendar month in UTC, ordered and hashable as year * 12 + (month - 1).
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    TimePoint first_day() const;
    YearMonth next() const;
    std::string str() const;  // "2021-03"
};

/// Parses "YYYY-MM-DD" (midnight UTC) or "YYYY-MM-DDTHH:MM:SSZ".
/// Throws std::invalid_argument on malformed input.
TimePoint parse_timestamp(std::string_view s);

std::string format_timestamp(TimePoint t);  // ISO-8601 with time, Z suffix
std::string format_date(TimePoint t);       // "YYYY-MM-DD"

TimePoint floor_hour(TimePoint t);
TimePoint floor_day(TimePoint t);
inline TimePoint add_days(TimePoint t, std::int64_t n) { return t + n * kSecondsPerDay; }

int weekday(TimePoint t);  // 0 = Monday .. 6 = Sunday
TimePoint first_monday_on_or_after(TimePoint t);

YearMonth year_month_of(TimePoint t);
int year_of(TimePoint t);

YearMonth parse_year_month(std::string_view s);  // "2021-03"

}  // namespace cryptofactor
