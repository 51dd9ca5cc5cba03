#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "pulso/error.hpp"

namespace pulso {

// Instant on the UTC timeline plus the offset it was written with.
// Ordering and equality look at the instant only.
struct Timestamp {
    std::int64_t utc_seconds = 0;
    int offset_minutes = 0;

    friend bool operator==(const Timestamp &a, const Timestamp &b) { return a.utc_seconds == b.utc_seconds; }
    friend std::strong_ordering operator<=>(const Timestamp &a, const Timestamp &b) {
        return a.utc_seconds <=> b.utc_seconds;
    }
};

// Argentina wall-clock time, UTC-03:00 (no DST in 2015).
inline constexpr int kArgentinaOffsetMinutes = -180;

namespace detail {

// days since 1970-01-01 in the proleptic Gregorian calendar
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, std::int64_t &y, unsigned &m, unsigned &d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
}

constexpr bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
    constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : table[m - 1];
}

}  // namespace detail

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z|±HH:MM|±HHMM]" (a space may replace
/// the 'T'). Without a zone designator `default_offset_minutes` is used, or
/// the parse fails when none is given. Fractional seconds are truncated.
inline std::optional<Timestamp> parse_timestamp(std::string_view s,
                                                std::optional<int> default_offset_minutes = std::nullopt) {
    auto digits = [&](std::size_t pos, std::size_t count, int &out) {
        if (pos + count > s.size()) return false;
        int v = 0;
        for (std::size_t i = pos; i < pos + count; ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            v = v * 10 + (s[i] - '0');
        }
        out = v;
        return true;
    };
    int year, month, day, hour, minute, second;
    if (!digits(0, 4, year) || s.size() < 19 || s[4] != '-' || !digits(5, 2, month) || s[7] != '-' ||
        !digits(8, 2, day) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !digits(11, 2, hour) ||
        s[13] != ':' || !digits(14, 2, minute) || s[16] != ':' || !digits(17, 2, second))
        return std::nullopt;
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(detail::days_in_month(year, static_cast<unsigned>(month))) || hour > 23 ||
        minute > 59 || second > 60)
        return std::nullopt;

    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t frac = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == frac) return std::nullopt;
    }

    int offset = 0;
    if (pos == s.size()) {
        if (!default_offset_minutes) return std::nullopt;
        offset = *default_offset_minutes;
    } else if ((s[pos] == 'Z' || s[pos] == 'z') && pos + 1 == s.size()) {
        offset = 0;
    } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '-' ? -1 : 1;
        int oh, om;
        std::size_t p = pos + 1;
        if (!digits(p, 2, oh)) return std::nullopt;
        p += 2;
        if (p < s.size() && s[p] == ':') ++p;
        if (!digits(p, 2, om) || p + 2 != s.size() || oh > 23 || om > 59) return std::nullopt;
        offset = sign * (oh * 60 + om);
    } else {
        return std::nullopt;
    }

    const std::int64_t days = detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    const std::int64_t local = days * 86400 + hour * 3600 + minute * 60 + second;
    return Timestamp{local - static_cast<std::int64_t>(offset) * 60, offset};
}

/// ISO-8601 rendering in the timestamp's own offset.
inline std::string format_timestamp(const Timestamp &t) {
    const std::int64_t local = t.utc_seconds + static_cast<std::int64_t>(t.offset_minutes) * 60;
    std::int64_t days = local / 86400;
    std::int64_t secs = local % 86400;
    if (secs < 0) {
        secs += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    detail::civil_from_days(days, y, m, d);
    const int off = t.offset_minutes < 0 ? -t.offset_minutes : t.offset_minutes;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d%c%02d:%02d", static_cast<long long>(y), m, d,
                  static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60),
                  t.offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
    return buf;
}

struct Coordinates {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const Coordinates &, const Coordinates &) = default;
};

// One ingested post. Field set mirrors the tweets table columns.
struct TweetRecord {
    std::int64_t id = 0;
    Timestamp created_at;
    std::string user_name;
    std::string screen_name;
    std::int64_t followers_count = 0;
    std::string text;
    std::optional<std::int64_t> retweet_count;
    std::optional<std::int64_t> retweeted_id;
    std::optional<std::int64_t> retweeted_favorite_count;
    std::optional<std::string> retweeted_text;
    std::optional<std::string> user_location;
    std::optional<Coordinates> coordinates;
    std::optional<std::string> hashtag_0;
    std::optional<std::string> hashtag_1;
    std::string lang;

    friend bool operator==(const TweetRecord &, const TweetRecord &) = default;
};

}  // namespace pulso
