#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flarevt/time.hpp"

namespace flarevt {

/// One catalog row: time of peak and peak X-ray flux in W m^-2.
struct FlareEvent {
  Timestamp timestamp;
  double peak_flux = 0.0;
  std::optional<std::string> source_class;
};

/// Minimum span assigned to a catalog whose events all share one instant,
/// so that the event rate stays finite.
inline constexpr double kMinSpanYears = 1.0 / 365.25;

/// Time-ordered, immutable collection of flare events.
///
/// Construction sorts by timestamp (stable, so duplicate timestamps keep
/// their input order) and rejects empty input or non-positive fluxes.
class Catalog {
 public:
  static Catalog from_events(std::vector<FlareEvent> events,
                             bool scaling_applied = false);

  std::span<const FlareEvent> events() const { return events_; }
  std::size_t n_total() const { return events_.size(); }
  double span_years() const { return span_years_; }
  /// Average number of events per year, n_total / span_years.
  double n_y() const { return static_cast<double>(events_.size()) / span_years_; }
  bool scaling_applied() const { return scaling_applied_; }

  Timestamp first_time() const { return events_.front().timestamp; }
  Timestamp last_time() const { return events_.back().timestamp; }

  /// Peak fluxes in catalog (time) order.
  std::vector<double> fluxes() const;

 private:
  Catalog(std::vector<FlareEvent> events, bool scaling_applied);

  std::vector<FlareEvent> events_;
  double span_years_ = kMinSpanYears;
  bool scaling_applied_ = false;
};

/// Divides a recorded GOES flux by `factor` to recover the true flux.
double apply_goes_scaling(double flux, double factor = 0.7);

/// Catalog-wide scaling. Throws StateError if the catalog is already scaled.
Catalog apply_goes_scaling(const Catalog& catalog, double factor = 0.7);

enum class CatalogFormat { csv, noaa_xrs };

CatalogFormat parse_catalog_format(std::string_view name);

struct LoadResult {
  Catalog catalog;
  std::size_t skipped = 0;
  /// One entry per skipped row: "<source>:<line>: <reason>".
  std::vector<std::string> skip_notes;
};

LoadResult load_catalog(const std::filesystem::path& path, CatalogFormat format);

/// Reads the canonical `timestamp,peak_flux_wm2[,class]` CSV.
LoadResult read_csv_catalog(std::istream& in, const std::string& source = "<stream>");

/// Best-effort reader for NOAA/NGDC GOES XRS event reports (fixed width).
/// See docs/noaa_xrs_format.md for the column map.
LoadResult read_noaa_xrs(std::istream& in, const std::string& source = "<stream>");

/// Writes the canonical CSV, fluxes in full precision.
void write_csv_catalog(std::ostream& out, const Catalog& catalog);

struct CatalogStats {
  std::size_t n_total = 0;
  double span_years = 0.0;
  double n_y = 0.0;
  double min_flux = 0.0;
  double max_flux = 0.0;
  /// Events per class letter A, B, C, M, X; fluxes below A1 count as A.
  std::map<char, std::size_t> class_counts;
};

CatalogStats catalog_stats(const Catalog& catalog);

}  // namespace flarevt
