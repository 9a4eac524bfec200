#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace ssu {

/// Microsecond resolution is exact for TLE epochs: the eighth decimal of a
/// day is 864 microseconds.
using Duration = std::chrono::microseconds;
using UtcTime = std::chrono::sys_time<Duration>;

inline constexpr double kSecondsPerDay = 86400.0;

/// Julian date (UTC taken as UT1).
double julian_date(UtcTime t);

/// Greenwich mean sidereal angle in radians, IAU-82 polynomial.
double gmst_radians(UtcTime t);

double seconds_between(UtcTime from, UtcTime to);
double minutes_between(UtcTime from, UtcTime to);

UtcTime add_seconds(UtcTime t, double seconds);

/// TLE epoch: two-digit year (57..99 -> 19xx) plus day-of-year with fraction.
/// The fraction is passed as text so the conversion is exact.
UtcTime tle_epoch(int two_digit_year, std::string_view day_of_year);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.ffffff]Z" (the trailing Z is optional).
UtcTime parse_utc(std::string_view text);
std::string format_utc(UtcTime t);

}  // namespace ssu
