#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace flarevt {

using Timestamp = std::chrono::sys_seconds;

/// Seconds in a Julian year; fractional-year arithmetic uses this throughout.
inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

/// Parses `YYYY-MM-DDTHH:MM:SSZ`. Throws ParseError on anything else.
Timestamp parse_iso8601(std::string_view text);

std::string format_iso8601(Timestamp t);

/// Signed difference b - a in Julian years.
inline double years_between(Timestamp a, Timestamp b) {
  return static_cast<double>((b - a).count()) / kSecondsPerYear;
}

Timestamp make_timestamp(int year, unsigned month, unsigned day,
                         int hour = 0, int minute = 0, int second = 0);

}  // namespace flarevt
