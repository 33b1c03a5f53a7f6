// Independent reference computations for the test suites. Nothing here
// calls into the library's numerical paths.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

/// GPD CDF straight from the closed form, long double.
inline long double gpd_cdf(long double shape, long double scale, long double y) {
  if (y <= 0) return 0;
  if (shape == 0) return 1 - std::exp(-y / scale);
  const long double t = 1 + shape * y / scale;
  if (t <= 0) return 1;
  return 1 - std::pow(t, -1 / shape);
}

/// Root of F(y) = q on [0, hi] by plain bisection.
inline double bisect_quantile(const std::function<long double(long double)>& cdf, double q,
                              double hi) {
  long double lo = 0, up = hi;
  while (cdf(up) < q) up *= 2;
  for (int i = 0; i < 400; ++i) {
    const long double mid = (lo + up) / 2;
    if (cdf(mid) < q) lo = mid; else up = mid;
  }
  return static_cast<double>((lo + up) / 2);
}

/// Term-by-term log-likelihood in extended precision; -inf off support.
inline double gpd_loglik(double shape, double scale, std::span<const double> y) {
  long double sum = 0;
  for (double v : y) {
    const long double t = 1 + static_cast<long double>(shape) * v / scale;
    if (t <= 0) return -std::numeric_limits<double>::infinity();
    long double term = -std::log(static_cast<long double>(scale));
    if (shape == 0) {
      term -= v / static_cast<long double>(scale);
    } else {
      term -= (1 + 1 / static_cast<long double>(shape)) * std::log(t);
    }
    sum += term;
  }
  return static_cast<double>(sum);
}

struct GridMax {
  double shape = 0, scale = 0, loglik = -std::numeric_limits<double>::infinity();
  double d_shape = 0, d_scale = 0;
};

/// Brute-force maximization over a rectangular grid.
inline GridMax grid_search(std::span<const double> y, double shape_lo, double shape_hi,
                           double scale_lo, double scale_hi, int n) {
  GridMax best;
  best.d_shape = (shape_hi - shape_lo) / (n - 1);
  best.d_scale = (scale_hi - scale_lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double shape = shape_lo + i * best.d_shape;
    for (int j = 0; j < n; ++j) {
      const double scale = scale_lo + j * best.d_scale;
      const double ll = gpd_loglik(shape, scale, y);
      if (ll > best.loglik) {
        best = {shape, scale, ll, best.d_shape, best.d_scale};
      }
    }
  }
  return best;
}

/// Ordinary least-squares slope through (x, y).
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= x.size(); my /= y.size();
  long double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return static_cast<double>(sxy / sxx);
}

}  // namespace oracle
