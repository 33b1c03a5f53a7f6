// Reader for NGDC/SWPC GOES XRS event reports. The layout moved around
// between GOES generations, so the fixed columns are tried first and a
// token scan for a class label is the fallback. Column map in
// docs/noaa_xrs_format.md.

#include <cctype>
#include <charconv>
#include <chrono>
#include <istream>
#include <regex>
#include <sstream>

#include "flarevt/catalog.hpp"
#include "flarevt/error.hpp"
#include "flarevt/flare_class.hpp"

namespace flarevt {

namespace {

bool read_digits(std::string_view line, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > line.size()) return false;
  const auto field = line.substr(pos, len);
  for (char c : field) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return std::from_chars(field.data(), field.data() + len, out).ec == std::errc{};
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

// Columns 60 (letter) and 61-63 (intensity): either "9.3" or tenths " 93".
std::optional<std::string> fixed_column_class(std::string_view line) {
  if (line.size() < 62) return std::nullopt;
  const char letter = line[59];
  if (std::string_view("ABCMX").find(letter) == std::string_view::npos) return std::nullopt;
  const std::string digits = trimmed(line.substr(60, std::min<std::size_t>(3, line.size() - 60)));
  if (digits.empty()) return std::nullopt;
  if (digits.find('.') != std::string::npos) return letter + digits;
  int tenths = 0;
  if (std::from_chars(digits.data(), digits.data() + digits.size(), tenths).ec != std::errc{} ||
      tenths <= 0) {
    return std::nullopt;
  }
  std::ostringstream os;
  os << letter << tenths / 10 << '.' << tenths % 10;
  return os.str();
}

std::optional<std::string> scanned_class(std::string_view line) {
  static const std::regex label(R"((^|\s)([ABCMX]\d+(\.\d+)?)(\s|$))");
  const std::string tail(line.size() > 27 ? line.substr(27) : std::string_view{});
  std::smatch m;
  if (std::regex_search(tail, m, label)) return m[2].str();
  return std::nullopt;
}

}  // namespace

LoadResult read_noaa_xrs(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<FlareEvent> events;
  std::vector<std::string> notes;
  auto skip = [&](const std::string& why) {
    notes.push_back(source + ":" + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view(line);
    if (trimmed(view).empty()) continue;
    if (view.size() < 17 || view.substr(0, 2) != "31") {
      skip("not an x-ray event record");
      continue;
    }
    int yy = 0, mm = 0, dd = 0;
    if (!read_digits(view, 5, 2, yy) || !read_digits(view, 7, 2, mm) ||
        !read_digits(view, 9, 2, dd)) {
      skip("unparseable date");
      continue;
    }
    const int year = yy >= 70 ? 1900 + yy : 2000 + yy;

    int start = 0, hhmm = 0;
    const bool has_start = read_digits(view, 13, 4, start);
    const bool has_max = read_digits(view, 23, 4, hhmm);
    if (!has_max && !has_start) {
      skip("no maximum or start time");
      continue;
    }
    if (!has_max) hhmm = start;
    // The date is the start date; a maximum before the start is past midnight.
    const bool next_day = has_max && has_start && hhmm < start;

    auto label = fixed_column_class(view);
    if (!label) label = scanned_class(view);
    if (!label) {
      skip("no flare class");
      continue;
    }

    FlareEvent event;
    try {
      event.timestamp = make_timestamp(year, static_cast<unsigned>(mm),
                                       static_cast<unsigned>(dd), hhmm / 100, hhmm % 100, 0);
      if (next_day) event.timestamp += std::chrono::days(1);
      event.peak_flux = parse_flare_class(*label);
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }
    event.source_class = *label;
    events.push_back(std::move(event));
  }
  if (events.empty()) {
    throw DataError(source + ": no valid x-ray event records (" +
                    std::to_string(notes.size()) + " skipped)");
  }
  const std::size_t skipped = notes.size();
  return LoadResult{Catalog::from_events(std::move(events)), skipped, std::move(notes)};
}

}  // namespace flarevt
