#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "ringpls/common.hpp"

namespace ringpls {

/// Calendar date in local civil time, no timezone attached.
struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const CivilDate&) const = default;

    bool valid() const {
        return std::chrono::year_month_day(std::chrono::year(year),
                                           std::chrono::month(static_cast<unsigned>(month)),
                                           std::chrono::day(static_cast<unsigned>(day)))
            .ok();
    }

    /// 0 = Sunday .. 6 = Saturday.
    int weekday() const {
        const std::chrono::year_month_day ymd(std::chrono::year(year),
                                              std::chrono::month(static_cast<unsigned>(month)),
                                              std::chrono::day(static_cast<unsigned>(day)));
        return static_cast<int>(std::chrono::weekday(std::chrono::sys_days(ymd)).c_encoding());
    }

    /// Days since 1970-01-01; used only for day arithmetic between dates.
    long serial() const {
        const std::chrono::year_month_day ymd(std::chrono::year(year),
                                              std::chrono::month(static_cast<unsigned>(month)),
                                              std::chrono::day(static_cast<unsigned>(day)));
        return std::chrono::sys_days(ymd).time_since_epoch().count();
    }

    /// Inverse of serial(): the date `days` after 1970-01-01.
    static CivilDate from_serial(long days) {
        const std::chrono::year_month_day ymd{
            std::chrono::sys_days(std::chrono::days(days))};
        return CivilDate{static_cast<int>(ymd.year()),
                         static_cast<int>(static_cast<unsigned>(ymd.month())),
                         static_cast<int>(static_cast<unsigned>(ymd.day()))};
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

/// Local civil timestamp at hour resolution ("naive" date-time).
struct CivilHour {
    CivilDate date;
    int hour = 0;  // 0..23

    auto operator<=>(const CivilHour&) const = default;

    bool valid() const { return date.valid() && hour >= 0 && hour <= 23; }

    std::string to_string() const {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00", date.year, date.month, date.day,
                      hour);
        return buf;
    }
};

namespace detail {

inline bool parse_uint(const std::string& s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

/// Parses "YYYY-MM-DD".
inline CivilDate parse_civil_date(const std::string& s) {
    CivilDate d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::parse_uint(s, 0, 4, d.year) ||
        !detail::parse_uint(s, 5, 2, d.month) || !detail::parse_uint(s, 8, 2, d.day) ||
        !d.valid()) {
        throw ParseError("invalid date '" + s + "' (expected YYYY-MM-DD)");
    }
    return d;
}

/// Parses "YYYY-MM-DDTHH" or "YYYY-MM-DDTHH:00".
inline CivilHour parse_civil_hour(const std::string& s) {
    if ((s.size() != 13 && s.size() != 16) || (s.size() == 16 && (s[13] != ':' || s[14] != '0' || s[15] != '0'))) {
        throw ParseError("invalid timestamp '" + s + "' (expected YYYY-MM-DDTHH:00)");
    }
    if (s[10] != 'T') throw ParseError("invalid timestamp '" + s + "' (expected 'T' separator)");
    CivilHour t;
    t.date = parse_civil_date(s.substr(0, 10));
    if (!detail::parse_uint(s, 11, 2, t.hour) || t.hour > 23) {
        throw ParseError("invalid hour in timestamp '" + s + "'");
    }
    return t;
}

}  // namespace ringpls
