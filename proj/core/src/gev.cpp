#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "flarevt/block_maxima.hpp"
#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"
#include "flarevt/optimize.hpp"

namespace flarevt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286;

double gev_loglik_raw(double location, double scale, double shape, std::span<const double> x) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shape) ||
      !std::isfinite(location)) {
    return kNegInf;
  }
  double sum = 0.0;
  for (double v : x) {
    const double s = (v - location) / scale;
    if (1.0 + shape * s <= 0.0) return kNegInf;
    const double e = detail::log1p_over(shape, s);
    sum += std::log1p(shape * s) + e + std::exp(-e);
  }
  return -static_cast<double>(x.size()) * std::log(scale) - sum;
}

}  // namespace

double gev_cdf(const GevParams& p, double z) {
  if (!(p.scale > 0.0)) throw DomainError("GEV scale must be positive");
  const double s = (z - p.location) / p.scale;
  if (1.0 + p.shape * s <= 0.0) return p.shape > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-detail::log1p_over(p.shape, s)));
}

double gev_logpdf(const GevParams& p, double z) {
  if (!(p.scale > 0.0)) throw DomainError("GEV scale must be positive");
  const double s = (z - p.location) / p.scale;
  if (1.0 + p.shape * s <= 0.0) return kNegInf;
  const double e = detail::log1p_over(p.shape, s);
  return -std::log(p.scale) - std::log1p(p.shape * s) - e - std::exp(-e);
}

double gev_quantile(const GevParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("GEV quantile requires q in (0, 1)");
  if (!(p.scale > 0.0)) throw DomainError("GEV scale must be positive");
  return p.location + p.scale * detail::expm1_over(p.shape, -std::log(-std::log(q)));
}

double gev_loglik(const GevParams& p, std::span<const double> maxima) {
  if (maxima.empty()) throw DataError("gev_loglik on an empty sample");
  return gev_loglik_raw(p.location, p.scale, p.shape, maxima);
}

GevFit fit_gev(std::span<const double> maxima) {
  const std::size_t n = maxima.size();
  if (n < 15) {
    throw DataError("GEV fit needs at least 15 maxima, got " + std::to_string(n));
  }
  for (double v : maxima) {
    if (!std::isfinite(v)) throw DataError("GEV maxima must be finite");
  }
  const double m = detail::mean(maxima);
  double var = 0.0;
  for (double v : maxima) var += (v - m) * (v - m);
  const double sd = std::sqrt(var / static_cast<double>(n - 1));
  const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
  if (*lo == *hi || !(sd > 0.0)) throw DataError("GEV fit on constant maxima");

  std::vector<double> x(maxima.begin(), maxima.end());
  for (auto& v : x) v = (v - m) / sd;

  const Objective negll = [&](std::span<const double> v) {
    const double ll = gev_loglik_raw(v[0], std::exp(v[1]), v[2], x);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };

  // Gumbel moment estimates; the Gumbel start is always inside the support.
  const double scale0 = std::sqrt(6.0) / M_PI;
  const double location0 = -kEulerGamma * scale0;
  std::vector<double> start{location0, std::log(scale0), 0.1};
  if (!std::isfinite(negll(start))) start[2] = 0.0;
  const double step[] = {0.1, 0.1, 0.1};
  const auto nm = nelder_mead(negll, start, step);

  GevFit fit;
  fit.n_maxima = n;
  fit.iterations = nm.iterations;
  const double scale_x = std::exp(nm.x[1]);
  fit.params.location = m + sd * nm.x[0];
  fit.params.scale = sd * scale_x;
  fit.params.shape = nm.x[2];
  fit.loglik = -nm.value - static_cast<double>(n) * std::log(sd);

  const Objective negll_natural = [&](std::span<const double> v) {
    const double ll = gev_loglik_raw(v[0], v[1], v[2], x);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  const double at[] = {nm.x[0], scale_x, nm.x[2]};
  const auto cov = invert_spd(numerical_hessian(negll_natural, at), 3);
  const bool cov_ok = !cov.empty();
  if (cov_ok) {
    const double jac[] = {sd, sd, 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) fit.cov[i][j] = cov[i * 3 + j] * jac[i] * jac[j];
    }
    fit.se_location = std::sqrt(fit.cov[0][0]);
    fit.se_scale = std::sqrt(fit.cov[1][1]);
    fit.se_shape = std::sqrt(fit.cov[2][2]);
  } else {
    fit.se_location = fit.se_scale = fit.se_shape = std::numeric_limits<double>::quiet_NaN();
  }
  fit.converged = nm.converged && cov_ok && std::isfinite(fit.loglik);
  return fit;
}

BlockMaxima block_maxima(const Catalog& catalog, std::chrono::seconds block_length) {
  if (block_length.count() <= 0) throw DomainError("block length must be positive");
  const auto origin = catalog.first_time();
  const auto last_block =
      static_cast<std::size_t>((catalog.last_time() - origin) / block_length);
  std::vector<double> best(last_block + 1, kNegInf);
  for (const auto& e : catalog.events()) {
    const auto b = static_cast<std::size_t>((e.timestamp - origin) / block_length);
    best[b] = std::max(best[b], e.peak_flux);
  }
  BlockMaxima out;
  for (double v : best) {
    if (v == kNegInf) {
      ++out.empty_blocks;
    } else {
      out.maxima.push_back(v);
    }
  }
  return out;
}

BlockMaxima annual_maxima(const Catalog& catalog) {
  using namespace std::chrono;
  auto year_of = [](Timestamp t) { return int(year_month_day{floor<days>(t)}.year()); };
  const int first = year_of(catalog.first_time());
  const int last = year_of(catalog.last_time());
  std::vector<double> best(static_cast<std::size_t>(last - first + 1), kNegInf);
  for (const auto& e : catalog.events()) {
    auto& slot = best[static_cast<std::size_t>(year_of(e.timestamp) - first)];
    slot = std::max(slot, e.peak_flux);
  }
  BlockMaxima out;
  for (double v : best) {
    if (v == kNegInf) {
      ++out.empty_blocks;
    } else {
      out.maxima.push_back(v);
    }
  }
  return out;
}

std::vector<double> block_maxima(std::span<const double> series, std::size_t block_size) {
  if (block_size == 0) throw DomainError("block size must be positive");
  std::vector<double> out;
  for (std::size_t start = 0; start + block_size <= series.size(); start += block_size) {
    out.push_back(*std::max_element(series.begin() + static_cast<std::ptrdiff_t>(start),
                                    series.begin() + static_cast<std::ptrdiff_t>(start + block_size)));
  }
  return out;
}

}  // namespace flarevt
