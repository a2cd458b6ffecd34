#include "cryptofactor/time.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace cryptofactor {

namespace {

using days_t = std::chrono::sys_days;

days_t to_sys_days(int y, int m, int d) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
    return days_t{ymd};
}

std::chrono::year_month_day civil_of(TimePoint t) {
    using namespace std::chrono;
    auto day_count = static_cast<std::int64_t>(t >= 0 ? t / kSecondsPerDay
                                                      : (t - kSecondsPerDay + 1) / kSecondsPerDay);
    return year_month_day{days_t{days{day_count}}};
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("malformed timestamp: " + std::string(s));
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

}  // namespace

TimePoint YearMonth::first_day() const {
    return to_sys_days(year, month, 1).time_since_epoch().count() * kSecondsPerDay;
}

YearMonth YearMonth::next() const {
    return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

TimePoint parse_timestamp(std::string_view s) {
    if (s.size() != 10 && s.size() != 20)
        throw std::invalid_argument("malformed timestamp: " + std::string(s));
    int y = parse_int(s, 0, 4);
    if (s[4] != '-' || s[7] != '-')
        throw std::invalid_argument("malformed timestamp: " + std::string(s));
    int mo = parse_int(s, 5, 2);
    int d = parse_int(s, 8, 2);
    TimePoint t = to_sys_days(y, mo, d).time_since_epoch().count() * kSecondsPerDay;
    if (s.size() == 20) {
        if (s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z')
            throw std::invalid_argument("malformed timestamp: " + std::string(s));
        int hh = parse_int(s, 11, 2);
        int mi = parse_int(s, 14, 2);
        int ss = parse_int(s, 17, 2);
        if (hh > 23 || mi > 59 || ss > 59)
            throw std::invalid_argument("malformed timestamp: " + std::string(s));
        t += hh * kSecondsPerHour + mi * 60 + ss;
    }
    return t;
}

std::string format_timestamp(TimePoint t) {
    auto ymd = civil_of(t);
    TimePoint rem = t - floor_day(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
                  int((rem / 60) % 60), int(rem % 60));
    return buf;
}

std::string format_date(TimePoint t) {
    auto ymd = civil_of(t);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

TimePoint floor_hour(TimePoint t) {
    TimePoint h = t / kSecondsPerHour;
    if (t < 0 && t % kSecondsPerHour != 0) --h;
    return h * kSecondsPerHour;
}

TimePoint floor_day(TimePoint t) {
    TimePoint d = t / kSecondsPerDay;
    if (t < 0 && t % kSecondsPerDay != 0) --d;
    return d * kSecondsPerDay;
}

int weekday(TimePoint t) {
    // 1970-01-01 was a Thursday (weekday 3 with Monday = 0).
    std::int64_t d = floor_day(t) / kSecondsPerDay;
    return static_cast<int>(((d % 7) + 7 + 3) % 7);
}

TimePoint first_monday_on_or_after(TimePoint t) {
    TimePoint d = floor_day(t);
    if (d < t) d += kSecondsPerDay;
    int w = weekday(d);
    return w == 0 ? d : d + (7 - w) * kSecondsPerDay;
}

YearMonth year_month_of(TimePoint t) {
    auto ymd = civil_of(t);
    return YearMonth{int(ymd.year()), static_cast<int>(unsigned(ymd.month()))};
}

int year_of(TimePoint t) { return int(civil_of(t).year()); }

YearMonth parse_year_month(std::string_view s) {
    if (s.size() != 7 || s[4] != '-')
        throw std::invalid_argument("malformed year-month: " + std::string(s));
    YearMonth ym{parse_int(s, 0, 4), parse_int(s, 5, 2)};
    if (ym.month < 1 || ym.month > 12)
        throw std::invalid_argument("malformed year-month: " + std::string(s));
    return ym;
}

}  // namespace cryptofactor
