#include "ssu/time.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ssu/error.hpp"

namespace ssu {

namespace {

constexpr double kUnixEpochJd = 2440587.5;

int parse_digits(std::string_view s, std::size_t pos, std::size_t len, std::string_view what) {
    if (pos + len > s.size()) throw ConfigError("truncated " + std::string(what));
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') throw ConfigError("bad digit in " + std::string(what));
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

double julian_date(UtcTime t) {
    const double days = static_cast<double>(t.time_since_epoch().count()) / (kSecondsPerDay * 1e6);
    return kUnixEpochJd + days;
}

double gmst_radians(UtcTime t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double tut1 = (julian_date(t) - 2451545.0) / 36525.0;
    double temp = -6.2e-6 * tut1 * tut1 * tut1 + 0.093104 * tut1 * tut1 +
                  (876600.0 * 3600.0 + 8640184.812866) * tut1 + 67310.54841;
    temp = std::fmod(temp * (std::numbers::pi / 180.0) / 240.0, two_pi);
    if (temp < 0.0) temp += two_pi;
    return temp;
}

double seconds_between(UtcTime from, UtcTime to) {
    return static_cast<double>((to - from).count()) * 1e-6;
}

double minutes_between(UtcTime from, UtcTime to) { return seconds_between(from, to) / 60.0; }

UtcTime add_seconds(UtcTime t, double seconds) {
    return t + Duration(static_cast<Duration::rep>(std::llround(seconds * 1e6)));
}

UtcTime tle_epoch(int two_digit_year, std::string_view day_of_year) {
    using namespace std::chrono;
    const int year = two_digit_year < 57 ? 2000 + two_digit_year : 1900 + two_digit_year;

    std::size_t dot = day_of_year.find('.');
    std::string_view int_part = day_of_year.substr(0, dot);
    while (!int_part.empty() && int_part.front() == ' ') int_part.remove_prefix(1);
    const int day = parse_digits(int_part, 0, int_part.size(), "epoch day");

    // Fraction of a day as an exact rational: digits / 10^n days.
    long long frac_digits = 0;
    long long frac_scale = 1;
    if (dot != std::string_view::npos) {
        for (char c : day_of_year.substr(dot + 1)) {
            if (c == ' ') break;
            if (c < '0' || c > '9') throw ConfigError("bad digit in epoch fraction");
            frac_digits = frac_digits * 10 + (c - '0');
            frac_scale *= 10;
        }
    }
    const long long us_per_day = 86'400'000'000LL;
    // Up to eight decimals the conversion is exact; longer fractions round.
    const long long frac_us =
        us_per_day % frac_scale == 0
            ? frac_digits * (us_per_day / frac_scale)
            : std::llround(static_cast<double>(frac_digits) / static_cast<double>(frac_scale) *
                           static_cast<double>(us_per_day));

    const sys_days jan1 = year_month_day{std::chrono::year{year}, January, std::chrono::day{1}};
    return UtcTime(jan1) + days(day - 1) + Duration(frac_us);
}

UtcTime parse_utc(std::string_view s) {
    using namespace std::chrono;
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':') {
        throw ConfigError("timestamp '" + std::string(s) + "' is not YYYY-MM-DDTHH:MM:SS");
    }
    const int y = parse_digits(s, 0, 4, "year");
    const int mo = parse_digits(s, 5, 2, "month");
    const int d = parse_digits(s, 8, 2, "day");
    const int hh = parse_digits(s, 11, 2, "hour");
    const int mm = parse_digits(s, 14, 2, "minute");
    const int ss = parse_digits(s, 17, 2, "second");
    const year_month_day ymd{std::chrono::year{y}, month{static_cast<unsigned>(mo)},
                             std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
        throw ConfigError("timestamp '" + std::string(s) + "' is out of range");
    }
    long long us = 0;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        long long scale = 1'000'000;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            scale /= 10;
            us += (s[pos] - '0') * scale;
            ++pos;
        }
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
    if (pos != s.size()) throw ConfigError("trailing characters in timestamp '" + std::string(s) + "'");
    return UtcTime(sys_days(ymd)) + hours(hh) + minutes(mm) + seconds(ss) + Duration(us);
}

std::string format_utc(UtcTime t) {
    using namespace std::chrono;
    const sys_days day = floor<days>(t);
    const year_month_day ymd(day);
    long long us = (t - UtcTime(day)).count();
    const long long h = us / 3'600'000'000LL;
    us -= h * 3'600'000'000LL;
    const long long m = us / 60'000'000LL;
    us -= m * 60'000'000LL;
    const long long sec = us / 1'000'000LL;
    us -= sec * 1'000'000LL;
    char buf[96];
    if (us == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, sec);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                      static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), h, m, sec, us);
    }
    return buf;
}

}  // namespace ssu
