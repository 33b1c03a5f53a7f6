#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flarevt/catalog.hpp"

namespace flarevt {

enum class BinStatistic { count, mean_flux };

BinStatistic parse_bin_statistic(std::string_view name);

/// Regularly sampled series; times are bin centres in years since `origin`.
struct BinnedSeries {
  Timestamp origin;
  double bin_width_years = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  /// Bins with no events whose mean flux was interpolated.
  std::vector<std::size_t> interpolated;
};

/// Average Gregorian month, the default bin width.
inline constexpr double kMonthYears = 1.0 / 12.0;

/// Bins the catalog from its first event onward. Empty bins are 0 for
/// counts and linearly interpolated for mean flux. Throws DomainError for a
/// non-positive width and DataError when the span covers fewer than 2 bins.
BinnedSeries bin_series(const Catalog& catalog, double bin_width_years,
                        BinStatistic statistic);

struct Periodogram {
  /// Fourier frequencies k / (n * bin_width), k = 1 .. n/2, cycles per year.
  std::vector<double> frequencies;
  /// One-sided power, normalized so that the total equals n * variance.
  std::vector<double> power;
  double bin_width_years = 0.0;
  std::size_t n_bins = 0;
};

/// Periodogram of the mean-removed series. Requires at least 8 samples.
Periodogram periodogram(std::span<const double> values, double bin_width_years);

struct DominantFrequencies {
  /// Angular frequencies (rad / year), strongest first.
  std::vector<double> omegas;
  std::vector<std::string> notes;
};

/// Top-k local maxima of the power spectrum, ties toward lower frequency.
DominantFrequencies dominant_frequencies(const Periodogram& pg, std::size_t k = 2);

struct SeasonalComponent {
  double omega = 0.0;  // rad / year
  double sin_coef = 0.0;
  double cos_coef = 0.0;
};

/// sum_i A_i sin(w_i t) + B_i cos(w_i t) + C with t in years since `origin`.
struct SeasonalModel {
  Timestamp origin;
  std::vector<SeasonalComponent> components;
  double offset = 0.0;

  double periodic(double t_years) const;
  double operator()(double t_years) const { return periodic(t_years) + offset; }
};

struct SeasonalFitOptions {
  /// Refine the frequencies by minimizing the residual sum of squares, with
  /// the linear coefficients solved exactly at every trial frequency set.
  bool refine_frequencies = false;
};

struct SeasonalFit {
  SeasonalModel model;
  double residual_variance = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Least-squares harmonic regression at the given angular frequencies.
/// Throws DataError with fewer than 2k+1 samples or a rank-deficient design
/// (e.g. duplicate frequencies).
SeasonalFit fit_seasonal(const BinnedSeries& series, std::span<const double> omegas,
                         const SeasonalFitOptions& options = {});

/// Smallest flux kept after subtraction.
inline constexpr double kDeseasonFloor = 1e-9;

/// Subtracts the periodic part of `model` from each event flux, evaluated at
/// the event time; the offset is kept so the flux level is preserved.
/// Results are floored at kDeseasonFloor.
Catalog deseasonalize(const Catalog& catalog, const SeasonalModel& model);

}  // namespace flarevt
