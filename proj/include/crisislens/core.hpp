// Copyright 2025 The CrisisLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRISISLENS_CORE_HPP
#define CRISISLENS_CORE_HPP

#include <array>
#include <compare>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crisislens {

// Input/config problems the caller can fix; the CLI maps these to exit 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

enum class Sentiment { Outrage, Hope, Despair };

inline constexpr std::array<Sentiment, 3> kSentiments = {
    Sentiment::Outrage, Sentiment::Hope, Sentiment::Despair};

inline std::string_view to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Outrage: return "Outrage";
        case Sentiment::Hope: return "Hope";
        case Sentiment::Despair: return "Despair";
    }
    return "?";
}

inline std::optional<Sentiment> parse_sentiment(std::string_view s) {
    if (s == "Outrage") return Sentiment::Outrage;
    if (s == "Hope") return Sentiment::Hope;
    if (s == "Despair") return Sentiment::Despair;
    return std::nullopt;
}

// Calendar date. Comparisons are by (y, m, d); serial() is days since the
// civil epoch 1970-01-01 (Hinnant's days_from_civil).
struct Date {
    int y = 0;
    int m = 0;
    int d = 0;

    auto operator<=>(const Date&) const = default;

    long serial() const {
        int yy = y - (m <= 2);
        long era = (yy >= 0 ? yy : yy - 399) / 400;
        unsigned yoe = static_cast<unsigned>(yy - era * 400);
        unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
        unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
        return era * 146097 + static_cast<long>(doe) - 719468;
    }

    static Date from_serial(long z) {
        z += 719468;
        long era = (z >= 0 ? z : z - 146096) / 146097;
        unsigned doe = static_cast<unsigned>(z - era * 146097);
        unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        long yy = static_cast<long>(yoe) + era * 400;
        unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        unsigned mp = (5 * doy + 2) / 153;
        unsigned dd = doy - (153 * mp + 2) / 5 + 1;
        unsigned mm = mp + (mp < 10 ? 3 : -9);
        return Date{static_cast<int>(yy + (mm <= 2)), static_cast<int>(mm),
                    static_cast<int>(dd)};
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }
};

inline bool is_valid_date(const Date& dt) {
    static constexpr int days_in[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (dt.m < 1 || dt.m > 12 || dt.d < 1) return false;
    int dim = days_in[dt.m - 1];
    if (dt.m == 2 && ((dt.y % 4 == 0 && dt.y % 100 != 0) || dt.y % 400 == 0)) dim = 29;
    return dt.d <= dim;
}

namespace detail {
inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}
}  // namespace detail

inline std::optional<Date> parse_date(std::string_view s) {
    Date dt;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!detail::parse_fixed_int(s, 0, 4, dt.y) || !detail::parse_fixed_int(s, 5, 2, dt.m) ||
        !detail::parse_fixed_int(s, 8, 2, dt.d))
        return std::nullopt;
    if (!is_valid_date(dt)) return std::nullopt;
    return dt;
}

// Publication timestamp: ISO-8601 calendar date with optional time and
// optional zone suffix (Z or +-HH:MM). Zone-suffixed instants are converted
// to UTC+6 wall time at parse, so comparisons and the canonical writer see
// Bangladesh local time; bare timestamps are taken as local already.
struct Timestamp {
    Date date;
    bool has_time = false;
    int hour = 0;
    int minute = 0;
    int second = 0;

    auto operator<=>(const Timestamp&) const = default;

    std::string to_string() const {
        if (!has_time) return date.to_string();
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", date.y, date.m,
                      date.d, hour, minute, second);
        return buf;
    }
};

inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    Timestamp ts;
    if (s.size() < 10) return std::nullopt;
    auto dt = parse_date(s.substr(0, 10));
    if (!dt) return std::nullopt;
    ts.date = *dt;
    if (s.size() == 10) return ts;

    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    if (!detail::parse_fixed_int(s, 11, 2, ts.hour) || s.size() < 19 || s[13] != ':' ||
        !detail::parse_fixed_int(s, 14, 2, ts.minute) || s[16] != ':' ||
        !detail::parse_fixed_int(s, 17, 2, ts.second))
        return std::nullopt;
    if (ts.hour > 23 || ts.minute > 59 || ts.second > 60) return std::nullopt;
    ts.has_time = true;

    std::string_view rest = s.substr(19);
    int zone_minutes = 6 * 60;  // assume UTC+6 when no suffix: nothing to shift
    bool has_zone = false;
    if (rest.empty()) {
        // bare local time
    } else if (rest == "Z") {
        zone_minutes = 0;
        has_zone = true;
    } else if ((rest[0] == '+' || rest[0] == '-') && rest.size() == 6 && rest[3] == ':') {
        int zh = 0, zm = 0;
        if (!detail::parse_fixed_int(rest, 1, 2, zh) || !detail::parse_fixed_int(rest, 4, 2, zm))
            return std::nullopt;
        zone_minutes = zh * 60 + zm;
        if (rest[0] == '-') zone_minutes = -zone_minutes;
        has_zone = true;
    } else {
        return std::nullopt;
    }

    if (has_zone && zone_minutes != 6 * 60) {
        long total = ts.date.serial() * 1440L + ts.hour * 60L + ts.minute;
        total += (6 * 60) - zone_minutes;
        long day = total >= 0 ? total / 1440 : (total - 1439) / 1440;
        long rem = total - day * 1440;
        ts.date = Date::from_serial(day);
        ts.hour = static_cast<int>(rem / 60);
        ts.minute = static_cast<int>(rem % 60);
    }
    return ts;
}

}  // namespace crisislens

#endif  // CRISISLENS_CORE_HPP
