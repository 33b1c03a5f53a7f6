#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flarevt/catalog.hpp"
#include "flarevt/distributions.hpp"

namespace flarevt {

/// Excesses over a threshold together with the catalog context they came from.
struct ExceedanceSet {
  double threshold = 0.0;
  /// y_i = x_i - threshold for every x_i > threshold, in catalog order.
  std::vector<double> excesses;
  std::size_t n_total = 0;
  double span_years = 0.0;
  double n_y = 0.0;

  std::size_t n_exceed() const { return excesses.size(); }
  double zeta_u() const {
    return static_cast<double>(excesses.size()) / static_cast<double>(n_total);
  }
};

/// Throws DataError when nothing exceeds `threshold`.
ExceedanceSet select_exceedances(const Catalog& catalog, double threshold);
ExceedanceSet select_exceedances(std::span<const double> values, double threshold);

struct MrlPoint {
  double u = 0.0;
  double mean_excess = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_exceed = 0;
};

struct StabilityPoint {
  double u = 0.0;
  double shape = 0.0;
  /// sigma* = scale - shape * u; flat above a valid threshold.
  double modified_scale = 0.0;
  double se_shape = 0.0;
  double se_mod_scale = 0.0;
  std::size_t n_exceed = 0;
  bool converged = false;
};

/// A diagnostic series plus notes about grid points that were dropped.
template <typename Point>
struct Diagnostic {
  std::vector<Point> points;
  std::vector<std::string> notes;
};

inline constexpr std::size_t kMinMrlExceedances = 5;
inline constexpr std::size_t kMinStabilityExceedances = 30;

/// Mean excess over each grid threshold with a normal-approximation
/// confidence band. Grid points with fewer than 5 exceedances are dropped
/// with a note. Throws DomainError on an empty or non-ascending grid.
Diagnostic<MrlPoint> mean_residual_life(std::span<const double> values,
                                        std::span<const double> grid,
                                        double confidence = 0.95);

/// One GPD fit per grid threshold (at least 30 exceedances each).
/// Non-converged fits are kept and flagged; they are not fatal.
Diagnostic<StabilityPoint> parameter_stability(std::span<const double> values,
                                               std::span<const double> grid,
                                               double confidence = 0.95);

/// `count` thresholds evenly spaced between two empirical quantiles
/// (defaults: 40 points from the 50th to the 99.5th percentile).
std::vector<double> default_threshold_grid(std::span<const double> values,
                                           std::size_t count = 40,
                                           double lower_quantile = 0.50,
                                           double upper_quantile = 0.995);

/// Evenly spaced grid lo..hi with n points (n >= 2, lo < hi).
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Empirical quantile with linear interpolation between order statistics.
double empirical_quantile(std::span<const double> values, double q);

struct ExtremalIndexResult {
  double theta = 1.0;
  std::size_t n_exceed = 0;
  std::size_t n_clusters = 0;
  std::size_t run_length = 1;
};

/// Runs estimator of the extremal index. Consecutive exceedances separated
/// by fewer than `run_length` non-exceeding observations share a cluster.
/// Observations are catalog rows, not wall-clock time.
ExtremalIndexResult runs_extremal_index(std::span<const double> values, double threshold,
                                        std::size_t run_length = 1);
ExtremalIndexResult runs_extremal_index(const Catalog& catalog, double threshold,
                                        std::size_t run_length = 1);

/// Index ranges [first, last] (inclusive, into the input) of each cluster.
struct Cluster {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t peak = 0;
};
std::vector<Cluster> runs_clusters(std::span<const double> values, double threshold,
                                   std::size_t run_length);

/// Keeps the peak event of every cluster. Throws DataError on zero exceedances.
Catalog decluster(const Catalog& catalog, double threshold, std::size_t run_length = 1);
std::vector<double> decluster(std::span<const double> values, double threshold,
                              std::size_t run_length = 1);

}  // namespace flarevt
