#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace flarevt {

/// Below this |shape| the light-tail limit formulas are used
/// (exponential for the GPD, Gumbel for the GEV).
inline constexpr double kShapeTolerance = 1e-6;

template <std::size_t N>
using SquareMatrix = std::array<std::array<double, N>, N>;

/// Generalised Pareto law for excesses y = x - threshold.
struct GpdParams {
  double shape = 0.0;
  double scale = 1.0;
  double threshold = 0.0;
};

/// Generalised extreme value law for block maxima.
struct GevParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;
};

/// Maximum-likelihood GPD fit. `cov` is ordered (shape, scale).
struct GpdFit {
  GpdParams params;
  std::size_t n_exceed = 0;
  std::size_t n_total = 0;
  double loglik = 0.0;
  double se_shape = 0.0;
  double se_scale = 0.0;
  SquareMatrix<2> cov{};
  /// Exceedance probability n_exceed / n_total.
  double zeta_u = 1.0;
  bool converged = false;
  int iterations = 0;
};

/// Maximum-likelihood GEV fit. `cov` is ordered (location, scale, shape).
struct GevFit {
  GevParams params;
  std::size_t n_maxima = 0;
  double loglik = 0.0;
  double se_location = 0.0;
  double se_scale = 0.0;
  double se_shape = 0.0;
  SquareMatrix<3> cov{};
  bool converged = false;
  int iterations = 0;
};

// GPD ------------------------------------------------------------------

/// P(Y <= y). Returns 0 for y <= 0 and 1 beyond the upper endpoint when shape < 0.
double gpd_cdf(const GpdParams& p, double y);
double gpd_survival(const GpdParams& p, double y);
double gpd_pdf(const GpdParams& p, double y);
/// Log density; -infinity outside the support.
double gpd_logpdf(const GpdParams& p, double y);
/// Inverse CDF for q in (0, 1). Throws DomainError otherwise.
double gpd_quantile(const GpdParams& p, double q);

/// Log-likelihood of excesses. Returns -infinity when any 1 + shape*y/scale <= 0
/// or scale <= 0. Throws DataError on an empty sample.
double gpd_loglik(const GpdParams& p, std::span<const double> excesses);

struct GpdFitOptions {
  /// Threshold recorded in the fitted params; excesses are already relative to it.
  double threshold = 0.0;
  /// Catalog size used for zeta_u; 0 means "excesses are the whole sample".
  std::size_t n_total = 0;
  /// Starting point; defaults to probability-weighted moments.
  std::optional<GpdParams> init;
};

/// Fits a GPD by maximum likelihood. Requires at least 10 excesses with at
/// least two distinct values (DataError otherwise). A fit that fails to
/// converge is returned with converged == false.
GpdFit fit_gpd(std::span<const double> excesses, const GpdFitOptions& options = {});

/// Probability-weighted-moment estimate, used to start the optimizer.
GpdParams gpd_pwm_estimate(std::span<const double> excesses);

// GEV ------------------------------------------------------------------

double gev_cdf(const GevParams& p, double z);
double gev_logpdf(const GevParams& p, double z);
double gev_quantile(const GevParams& p, double q);
double gev_loglik(const GevParams& p, std::span<const double> maxima);

/// Fits a GEV by maximum likelihood. Requires at least 15 maxima that are
/// not all equal (DataError otherwise).
GevFit fit_gev(std::span<const double> maxima);

// Profile likelihood ---------------------------------------------------

struct ShapeTarget {};

/// Profile over the N-year return level z_N, with N * n_y * zeta_u > 1.
struct ReturnLevelTarget {
  double years = 0.0;
  double n_y = 0.0;
};

using ProfileTarget = std::variant<ShapeTarget, ReturnLevelTarget>;

struct ProfileInterval {
  std::string parameter;
  double mle = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double confidence = 0.95;
  /// False when the deviance never crossed the cutoff inside the search range
  /// on that side; the endpoint is then the search limit.
  bool lower_found = true;
  bool upper_found = true;
};

/// Profile-likelihood interval {theta : 2(l_max - l_p(theta)) <= chi2_1(confidence)}.
/// Requires a converged fit (StateError) and confidence in (0.5, 1) (DomainError).
ProfileInterval profile_ci(std::span<const double> excesses, const GpdFit& fit,
                           const ProfileTarget& target, double confidence = 0.95);

/// Profile log-likelihood at a fixed shape: maximizes over scale.
/// Returns the maximized log-likelihood and the maximizing scale.
struct ProfilePoint {
  double loglik = 0.0;
  double scale = 0.0;
};
ProfilePoint gpd_profile_shape(std::span<const double> excesses, double shape);

/// Upper `confidence` quantile of the chi-square law with one degree of freedom.
double chi_square_1_quantile(double confidence);

/// Two-sided standard normal critical value, e.g. 0.95 -> 1.959964.
double normal_critical_value(double confidence);

}  // namespace flarevt
