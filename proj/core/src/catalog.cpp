#include "flarevt/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flarevt/error.hpp"
#include "flarevt/flare_class.hpp"
#include "flarevt/serialize.hpp"

namespace flarevt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_flux(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && end == text.data() + text.size() && std::isfinite(out);
}

char class_letter(double flux) {
  if (flux < 1e-7) return 'A';
  if (flux < 1e-6) return 'B';
  if (flux < 1e-5) return 'C';
  if (flux < 1e-4) return 'M';
  return 'X';
}

}  // namespace

Catalog::Catalog(std::vector<FlareEvent> events, bool scaling_applied)
    : events_(std::move(events)), scaling_applied_(scaling_applied) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const FlareEvent& a, const FlareEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  span_years_ = std::max(years_between(events_.front().timestamp, events_.back().timestamp),
                         kMinSpanYears);
}

Catalog Catalog::from_events(std::vector<FlareEvent> events, bool scaling_applied) {
  if (events.empty()) throw DataError("catalog has no events");
  for (const auto& e : events) {
    if (!(e.peak_flux > 0.0) || !std::isfinite(e.peak_flux)) {
      throw DataError("event at " + format_iso8601(e.timestamp) +
                      " has non-positive or non-finite flux");
    }
  }
  return Catalog(std::move(events), scaling_applied);
}

std::vector<double> Catalog::fluxes() const {
  std::vector<double> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(e.peak_flux);
  return out;
}

double apply_goes_scaling(double flux, double factor) {
  if (!(flux > 0.0)) throw DomainError("GOES scaling requires a positive flux");
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw DomainError("GOES scaling factor must lie in (0, 1]");
  }
  return flux / factor;
}

Catalog apply_goes_scaling(const Catalog& catalog, double factor) {
  if (catalog.scaling_applied()) {
    throw StateError("GOES scaling has already been applied to this catalog");
  }
  std::vector<FlareEvent> events(catalog.events().begin(), catalog.events().end());
  for (auto& e : events) e.peak_flux = apply_goes_scaling(e.peak_flux, factor);
  return Catalog::from_events(std::move(events), true);
}

CatalogFormat parse_catalog_format(std::string_view name) {
  if (name == "csv") return CatalogFormat::csv;
  if (name == "noaa-xrs") return CatalogFormat::noaa_xrs;
  throw ParseError("unknown catalog format '" + std::string(name) +
                   "' (expected csv or noaa-xrs)");
}

LoadResult load_catalog(const std::filesystem::path& path, CatalogFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open catalog file '" + path.string() + "'");
  const std::string source = path.string();
  return format == CatalogFormat::csv ? read_csv_catalog(in, source)
                                      : read_noaa_xrs(in, source);
}

LoadResult read_csv_catalog(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool has_class = false;
  std::vector<FlareEvent> events;
  std::vector<std::string> notes;
  const auto earliest = make_timestamp(1970, 1, 1);
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());

  auto skip = [&](const std::string& why) {
    notes.push_back(source + ":" + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_commas(view);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "timestamp" || fields[1] != "peak_flux_wm2" ||
          (fields.size() == 3 && fields[2] != "class") || fields.size() > 3) {
        throw ParseError(source + ":" + std::to_string(line_no) +
                         ": expected header 'timestamp,peak_flux_wm2[,class]'");
      }
      have_header = true;
      has_class = fields.size() == 3;
      continue;
    }
    if (fields.size() < 2 || fields.size() > (has_class ? 3u : 2u)) {
      skip("wrong number of fields");
      continue;
    }
    FlareEvent event;
    try {
      event.timestamp = parse_iso8601(fields[0]);
    } catch (const ParseError& e) {
      skip(e.what());
      continue;
    }
    if (event.timestamp < earliest || event.timestamp > now) {
      skip("timestamp outside [1970-01-01, now]");
      continue;
    }
    if (!parse_flux(fields[1], event.peak_flux) || !(event.peak_flux > 0.0)) {
      skip("unparseable or non-positive flux '" + std::string(fields[1]) + "'");
      continue;
    }
    if (fields.size() == 3 && !fields[2].empty()) event.source_class = std::string(fields[2]);
    events.push_back(std::move(event));
  }
  if (!have_header) throw DataError(source + ": empty catalog file");
  if (events.empty()) {
    throw DataError(source + ": no valid rows (" + std::to_string(notes.size()) + " skipped)");
  }
  const std::size_t skipped = notes.size();
  return LoadResult{Catalog::from_events(std::move(events)), skipped, std::move(notes)};
}

void write_csv_catalog(std::ostream& out, const Catalog& catalog) {
  bool any_class = false;
  for (const auto& e : catalog.events()) any_class = any_class || e.source_class.has_value();
  out << (any_class ? "timestamp,peak_flux_wm2,class\n" : "timestamp,peak_flux_wm2\n");
  for (const auto& e : catalog.events()) {
    out << format_iso8601(e.timestamp) << ',' << format_double(e.peak_flux);
    if (any_class) out << ',' << e.source_class.value_or("");
    out << '\n';
  }
}

CatalogStats catalog_stats(const Catalog& catalog) {
  if (catalog.n_total() == 0) throw DataError("catalog_stats on an empty catalog");
  CatalogStats stats;
  stats.n_total = catalog.n_total();
  stats.span_years = catalog.span_years();
  stats.n_y = catalog.n_y();
  stats.min_flux = catalog.events().front().peak_flux;
  stats.max_flux = stats.min_flux;
  for (char c : {'A', 'B', 'C', 'M', 'X'}) stats.class_counts[c] = 0;
  for (const auto& e : catalog.events()) {
    stats.min_flux = std::min(stats.min_flux, e.peak_flux);
    stats.max_flux = std::max(stats.max_flux, e.peak_flux);
    ++stats.class_counts[class_letter(e.peak_flux)];
  }
  return stats;
}

}  // namespace flarevt
