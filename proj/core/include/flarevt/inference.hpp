#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flarevt/distributions.hpp"

namespace flarevt {

/// Level exceeded on average once every `years` years:
///   z_N = u + scale/shape * ((N n_y zeta_u)^shape - 1)
/// (log form for |shape| < kShapeTolerance). Throws DomainError when
/// N * n_y * zeta_u <= 1 since the level would lie below the threshold.
double return_level(const GpdFit& fit, double years, double n_y);

/// Inverse of return_level. Throws DomainError for level <= threshold.
/// Returns +infinity beyond the upper endpoint of a bounded (shape < 0) tail.
double return_period(const GpdFit& fit, double level, double n_y);

/// Unconditional probability that a single event exceeds `level` under the
/// fitted tail model: zeta_u * (1 - H(level - u)). Requires level >= u.
double exceedance_probability(const GpdFit& fit, double level);

struct ReturnLevelPoint {
  double years = 0.0;
  double level = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// False when the profile search did not bracket one of the endpoints.
  bool ci_ok = true;
};

struct ReturnLevelCurve {
  std::vector<ReturnLevelPoint> points;
  GpdFit fit;
  double n_y = 0.0;
  double confidence = 0.95;
};

/// Return levels with profile-likelihood confidence intervals.
ReturnLevelCurve return_curve(std::span<const double> excesses, const GpdFit& fit,
                              std::span<const double> years, double n_y,
                              double confidence = 0.95);

struct CyclePoint {
  double level = 0.0;
  double p_single = 0.0;
  double p_cycle = 0.0;
  double expected_count = 0.0;
  /// True when p_single came from the fitted tail, false for the empirical branch.
  bool model = true;
};

struct CycleForecast {
  std::vector<CyclePoint> points;
  double n_y = 0.0;
  double cycle_years = 11.0;
};

/// Probability of at least one event above each level per cycle,
/// 1 - (1 - p)^(n_y * cycle_years), and the binomial mean p * n_y * cycle_years.
/// Levels above the threshold use the fitted tail; levels at or below it use
/// the empirical survival of `catalog_fluxes` (all set to 0 if none given).
CycleForecast cycle_forecast(const GpdFit& fit, std::span<const double> levels, double n_y,
                             double cycle_years = 11.0,
                             std::span<const double> catalog_fluxes = {});

/// Binomial helpers shared by cycle_forecast and decade_probability.
double probability_at_least_one(double p_single, double trials);

/// Probability of at least one event above `level` within `years`, per-event
/// form 1 - (1 - p)^(n_y * years). Throws DomainError for level <= u.
double decade_probability(const GpdFit& fit, double level, double n_y, double years = 10.0);

/// Same question from the annual exceedance rate: 1 - (1 - 1/T)^years, with T
/// the return period of `level`.
double decade_probability_annual(const GpdFit& fit, double level, double n_y,
                                 double years = 10.0);

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct DensityBin {
  double center = 0.0;
  double empirical = 0.0;
  double model = 0.0;
};

struct SurvivalPoint {
  double log10_level = 0.0;
  double log10_empirical = 0.0;
  double log10_model = 0.0;
};

/// Goodness-of-fit series for PP, QQ, density and log-log survival plots.
/// Plotting positions are i / (n + 1).
struct FitDiagnostics {
  std::vector<PlotPoint> pp;  // (empirical, model)
  std::vector<PlotPoint> qq;  // (model quantile, observed excess)
  std::vector<DensityBin> density;
  std::vector<SurvivalPoint> loglog;
};

FitDiagnostics diagnostics(const GpdFit& fit, std::span<const double> excesses,
                           std::size_t density_bins = 0);

/// Least-squares line through (x, y) points.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit least_squares_line(std::span<const PlotPoint> points);

}  // namespace flarevt
