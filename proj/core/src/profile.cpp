#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "detail.hpp"
#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"

namespace flarevt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Shapes at or below -1 make the GPD likelihood unbounded; the profile stops short.
constexpr double kMinProfileShape = -0.99;

// Maximizes the log-likelihood of unit-scaled excesses over scale at fixed shape.
// The score in scale is strictly decreasing for shape > -1, so the maximizer is
// the unique root of
//   g(scale) = -n + (1 + shape) * sum z_i / (scale + shape * z_i).
ProfilePoint profile_scale(std::span<const double> z, double shape, double z_max,
                           double z_mean) {
  if (!(shape > -1.0)) throw DomainError("profile likelihood undefined for shape <= -1");
  const double n = static_cast<double>(z.size());
  const double floor_scale = shape < 0.0 ? -shape * z_max : 0.0;
  auto score = [&](double r) {
    const double scale = floor_scale + std::exp(r);
    double sum = 0.0;
    for (double v : z) sum += v / (scale + shape * v);
    return -n + (1.0 + shape) * sum;
  };

  double r0 = std::log(std::max(z_mean * std::max(1.0 - shape, 0.1) - floor_scale, 1e-3 * z_mean));
  double lo = r0, hi = r0;
  double g0 = score(r0);
  if (g0 > 0.0) {
    for (int i = 0; i < 200 && score(hi) > 0.0; ++i) hi += 1.0;
  } else {
    for (int i = 0; i < 200 && score(lo) <= 0.0; ++i) lo -= 1.0;
  }
  double root = r0;
  if (g0 != 0.0) {
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        score, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    root = 0.5 * (bracket.first + bracket.second);
  }
  const double scale = floor_scale + std::exp(root);
  return {detail::gpd_loglik_raw(shape, scale, z), scale};
}

struct Side {
  double value = 0.0;
  bool found = true;
};

// Walks away from the MLE until the deviance exceeds the cutoff, then bisects.
template <typename Deviance>
Side search_side(const Deviance& deviance, double mle, double direction, double first_step,
                 double limit, double cutoff) {
  double inside = mle;
  double step = first_step;
  double outside = mle;
  for (int i = 0; i < 200; ++i) {
    double candidate = mle + direction * step;
    const bool at_limit = direction > 0 ? candidate >= limit : candidate <= limit;
    if (at_limit) candidate = limit;
    if (!(deviance(candidate) <= cutoff)) {
      outside = candidate;
      break;
    }
    if (at_limit) return {limit, false};
    inside = candidate;
    step *= 2.0;
  }
  if (outside == mle) return {inside, false};
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (!(deviance(mid) <= cutoff)) {
      outside = mid;
    } else {
      inside = mid;
    }
    if (std::abs(outside - inside) <= 1e-12 * (1.0 + std::abs(inside))) break;
  }
  return {0.5 * (inside + outside), true};
}

// Log-likelihood with the N-year excess level d held fixed:
// scale(shape) = d / (((m)^shape - 1) / shape), maximized over shape.
double profile_return_level(std::span<const double> z, double d, double log_m,
                            double shape_center) {
  auto ll = [&](double shape) {
    const double scale = d / detail::expm1_over(shape, log_m);
    return detail::gpd_loglik_raw(shape, scale, z);
  };
  const double lo = std::max(kMinProfileShape, shape_center - 1.5);
  const double hi = shape_center + 1.5;
  constexpr int kGrid = 60;
  int best_i = -1;
  double best = kNegInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double shape = lo + (hi - lo) * i / kGrid;
    const double v = ll(shape);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i < 0) return kNegInf;
  const double a = lo + (hi - lo) * std::max(best_i - 1, 0) / kGrid;
  const double b = lo + (hi - lo) * std::min(best_i + 1, kGrid) / kGrid;
  auto neg = [&](double shape) {
    const double v = ll(shape);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
  };
  std::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::brent_find_minima(neg, a, b, 40, max_iter);
  return std::max(best, -r.second);
}

}  // namespace

double chi_square_1_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must be in (0, 1)");
  return boost::math::quantile(boost::math::chi_squared(1.0), confidence);
}

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must be in (0, 1)");
  return boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
}

ProfilePoint gpd_profile_shape(std::span<const double> excesses, double shape) {
  const double unit = detail::check_excesses(excesses, 2);
  std::vector<double> z(excesses.begin(), excesses.end());
  for (auto& v : z) v /= unit;
  const double z_max = *std::max_element(z.begin(), z.end());
  ProfilePoint p = profile_scale(z, shape, z_max, 1.0);
  p.loglik -= static_cast<double>(z.size()) * std::log(unit);
  p.scale *= unit;
  return p;
}

ProfileInterval profile_ci(std::span<const double> excesses, const GpdFit& fit,
                           const ProfileTarget& target, double confidence) {
  if (!fit.converged) throw StateError("profile_ci requires a converged fit");
  if (!(confidence > 0.5 && confidence < 1.0)) {
    throw DomainError("profile confidence must lie in (0.5, 1)");
  }
  const double unit = detail::check_excesses(excesses, 2);
  std::vector<double> z(excesses.begin(), excesses.end());
  for (auto& v : z) v /= unit;
  const double z_max = *std::max_element(z.begin(), z.end());
  const double cutoff = chi_square_1_quantile(confidence);
  const double shape_hat = fit.params.shape;
  const double scale_hat = fit.params.scale / unit;

  ProfileInterval out;
  out.confidence = confidence;

  if (std::holds_alternative<ShapeTarget>(target)) {
    out.parameter = "shape";
    out.mle = shape_hat;
    const double l_max = std::max(detail::gpd_loglik_raw(shape_hat, scale_hat, z),
                                  profile_scale(z, shape_hat, z_max, 1.0).loglik);
    auto deviance = [&](double shape) {
      return 2.0 * (l_max - profile_scale(z, shape, z_max, 1.0).loglik);
    };
    const double step = std::max(fit.se_shape, 0.01);
    const auto lower = search_side(deviance, shape_hat, -1.0, step, kMinProfileShape, cutoff);
    const auto upper = search_side(deviance, shape_hat, 1.0, step, shape_hat + 10.0, cutoff);
    out.lower = std::min(lower.value, shape_hat);
    out.upper = std::max(upper.value, shape_hat);
    out.lower_found = lower.found;
    out.upper_found = upper.found;
    return out;
  }

  const auto& rl = std::get<ReturnLevelTarget>(target);
  const double m = rl.years * rl.n_y * fit.zeta_u;
  if (!(m > 1.0)) {
    throw DomainError("return level below threshold: N * n_y * zeta_u must exceed 1");
  }
  const double log_m = std::log(m);
  const double d_hat = scale_hat * detail::expm1_over(shape_hat, log_m);
  out.parameter = "return_level";
  out.mle = fit.params.threshold + d_hat * unit;

  const double l_max = std::max(detail::gpd_loglik_raw(shape_hat, scale_hat, z),
                                profile_return_level(z, d_hat, log_m, shape_hat));
  auto deviance = [&](double d) {
    if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
    return 2.0 * (l_max - profile_return_level(z, d, log_m, shape_hat));
  };
  const double step = 0.1 * d_hat;
  const auto lower = search_side(deviance, d_hat, -1.0, step, 1e-9 * d_hat, cutoff);
  const auto upper = search_side(deviance, d_hat, 1.0, step, 1e4 * d_hat, cutoff);
  out.lower = fit.params.threshold + std::min(lower.value, d_hat) * unit;
  out.upper = fit.params.threshold + std::max(upper.value, d_hat) * unit;
  out.lower_found = lower.found;
  out.upper_found = upper.found;
  return out;
}

}  // namespace flarevt
