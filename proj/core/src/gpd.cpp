#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "detail.hpp"
#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"
#include "flarevt/optimize.hpp"

namespace flarevt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

namespace detail {

double check_excesses(std::span<const double> excesses, std::size_t min_count) {
  if (excesses.size() < min_count) {
    throw DataError("GPD fit needs at least " + std::to_string(min_count) + " excesses, got " +
                    std::to_string(excesses.size()));
  }
  for (double y : excesses) {
    if (!(y > 0.0) || !std::isfinite(y)) {
      throw DataError("GPD excesses must be positive and finite");
    }
  }
  const auto [lo, hi] = std::minmax_element(excesses.begin(), excesses.end());
  if (*lo == *hi) throw DataError("GPD fit needs at least two distinct excesses");
  return mean(excesses);
}

double gpd_loglik_raw(double shape, double scale, std::span<const double> z) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shape)) return kNegInf;
  double sum = 0.0;
  for (double y : z) {
    const double t = y / scale;
    if (1.0 + shape * t <= 0.0) return kNegInf;
    sum += std::log1p(shape * t) + log1p_over(shape, t);
  }
  return -static_cast<double>(z.size()) * std::log(scale) - sum;
}

}  // namespace detail

double gpd_survival(const GpdParams& p, double y) {
  if (!(p.scale > 0.0)) throw DomainError("GPD scale must be positive");
  if (y <= 0.0) return 1.0;
  const double t = y / p.scale;
  if (1.0 + p.shape * t <= 0.0) return 0.0;
  return std::exp(-detail::log1p_over(p.shape, t));
}

double gpd_cdf(const GpdParams& p, double y) {
  if (!(p.scale > 0.0)) throw DomainError("GPD scale must be positive");
  if (y <= 0.0) return 0.0;
  const double t = y / p.scale;
  if (1.0 + p.shape * t <= 0.0) return 1.0;
  return -std::expm1(-detail::log1p_over(p.shape, t));
}

double gpd_logpdf(const GpdParams& p, double y) {
  if (!(p.scale > 0.0)) throw DomainError("GPD scale must be positive");
  if (y < 0.0) return kNegInf;
  const double t = y / p.scale;
  if (1.0 + p.shape * t <= 0.0) return kNegInf;
  return -std::log(p.scale) - std::log1p(p.shape * t) - detail::log1p_over(p.shape, t);
}

double gpd_pdf(const GpdParams& p, double y) { return std::exp(gpd_logpdf(p, y)); }

double gpd_quantile(const GpdParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("GPD quantile requires q in (0, 1)");
  if (!(p.scale > 0.0)) throw DomainError("GPD scale must be positive");
  // y = scale/shape * ((1 - q)^-shape - 1)
  return p.scale * detail::expm1_over(p.shape, -std::log1p(-q));
}

double gpd_loglik(const GpdParams& p, std::span<const double> excesses) {
  if (excesses.empty()) throw DataError("gpd_loglik on an empty sample");
  return detail::gpd_loglik_raw(p.shape, p.scale, excesses);
}

GpdParams gpd_pwm_estimate(std::span<const double> excesses) {
  std::vector<double> y(excesses.begin(), excesses.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(y.size());
  double a0 = 0.0, a1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = (static_cast<double>(i) + 1.0 - 0.35) / n;
    a0 += y[i];
    a1 += (1.0 - p) * y[i];
  }
  a0 /= n;
  a1 /= n;
  const double denom = a0 - 2.0 * a1;
  GpdParams out;
  out.shape = 2.0 - a0 / denom;
  out.scale = 2.0 * a0 * a1 / denom;
  return out;
}

GpdFit fit_gpd(std::span<const double> excesses, const GpdFitOptions& options) {
  const double unit = detail::check_excesses(excesses, 10);
  const std::size_t n = excesses.size();
  if (options.n_total != 0 && options.n_total < n) {
    throw DataError("n_total is smaller than the number of excesses");
  }

  std::vector<double> z(excesses.begin(), excesses.end());
  for (auto& v : z) v /= unit;
  const double z_max = *std::max_element(z.begin(), z.end());

  auto feasible = [&](double shape, double scale) {
    return std::isfinite(shape) && scale > 0.0 && std::isfinite(scale) &&
           1.0 + shape * z_max / scale > 0.0 && std::isfinite(detail::gpd_loglik_raw(shape, scale, z));
  };

  double shape0 = 0.1, scale0 = 1.0;
  if (options.init) {
    shape0 = options.init->shape;
    scale0 = options.init->scale / unit;
  } else {
    GpdParams pwm = gpd_pwm_estimate(z);
    if (pwm.shape > -0.5 && pwm.shape < 1.0 && feasible(pwm.shape, pwm.scale)) {
      shape0 = pwm.shape;
      scale0 = pwm.scale;
    }
  }
  if (!feasible(shape0, scale0)) {
    shape0 = 0.1;
    scale0 = 1.0;
  }

  const Objective negll = [&](std::span<const double> v) {
    const double ll = detail::gpd_loglik_raw(v[0], std::exp(v[1]), z);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  const double step[] = {0.1, 0.1};
  const auto nm = nelder_mead(negll, {shape0, std::log(scale0)}, step);

  GpdFit fit;
  fit.n_exceed = n;
  fit.n_total = options.n_total == 0 ? n : options.n_total;
  fit.zeta_u = static_cast<double>(n) / static_cast<double>(fit.n_total);
  fit.iterations = nm.iterations;
  fit.params.threshold = options.threshold;
  fit.params.shape = nm.x[0];
  const double scale_z = std::exp(nm.x[1]);
  fit.params.scale = scale_z * unit;
  fit.loglik = -nm.value - static_cast<double>(n) * std::log(unit);

  // Observed information in (shape, unit-scaled scale), then rescaled.
  const Objective negll_natural = [&](std::span<const double> v) {
    const double ll = detail::gpd_loglik_raw(v[0], v[1], z);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  const double at[] = {fit.params.shape, scale_z};
  const auto hess = numerical_hessian(negll_natural, at);
  const auto cov = invert_spd(hess, 2);
  bool cov_ok = !cov.empty();
  if (cov_ok) {
    fit.cov[0][0] = cov[0];
    fit.cov[0][1] = fit.cov[1][0] = cov[1] * unit;
    fit.cov[1][1] = cov[3] * unit * unit;
    fit.se_shape = std::sqrt(fit.cov[0][0]);
    fit.se_scale = std::sqrt(fit.cov[1][1]);
  } else {
    fit.se_shape = fit.se_scale = std::numeric_limits<double>::quiet_NaN();
  }
  fit.converged = nm.converged && cov_ok && std::isfinite(fit.loglik);
  return fit;
}

}  // namespace flarevt
