#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flarevt/distributions.hpp"
#include "flarevt/seasonality.hpp"
#include "flarevt/threshold.hpp"

namespace flarevt {

/// Version tag written into every JSON document; readers reject others.
inline constexpr int kDocumentVersion = 1;

/// Everything `returns` needs from `fit`: the fit, the sample it came
/// from and the catalog rate.
struct FitDocument {
  GpdFit fit;
  std::vector<double> excesses;
  std::size_t n_total = 0;
  double span_years = 0.0;
  double n_y = 0.0;
  std::optional<ProfileInterval> shape_ci;
  std::optional<ExtremalIndexResult> extremal_index;
};

std::string to_json(const GpdFit& fit);
std::string to_json(const GevFit& fit);
std::string to_json(const SeasonalModel& model);
std::string to_json(const FitDocument& doc);

GpdFit gpd_fit_from_json(const std::string& text);
GevFit gev_fit_from_json(const std::string& text);
SeasonalModel seasonal_model_from_json(const std::string& text);
FitDocument fit_document_from_json(const std::string& text);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace flarevt
