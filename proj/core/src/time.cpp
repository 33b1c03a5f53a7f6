#include "flarevt/time.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "flarevt/error.hpp"

namespace flarevt {

namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  const char* first = text.data() + pos;
  const auto [end, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || end != first + len) {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute,
                         int second) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) {
    throw ParseError("invalid calendar date " + std::to_string(year) + "-" +
                     std::to_string(month) + "-" + std::to_string(day));
  }
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
    throw ParseError("invalid time of day");
  }
  return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

Timestamp parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    throw ParseError("malformed timestamp '" + std::string(text) +
                     "' (expected YYYY-MM-DDTHH:MM:SSZ)");
  }
  return make_timestamp(read_int(text, 0, 4), static_cast<unsigned>(read_int(text, 5, 2)),
                        static_cast<unsigned>(read_int(text, 8, 2)), read_int(text, 11, 2),
                        read_int(text, 14, 2), read_int(text, 17, 2));
}

std::string format_iso8601(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss tod{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                int(tod.minutes().count()), int(tod.seconds().count()));
  return buf;
}

}  // namespace flarevt
