#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "flarevt/distributions.hpp"

namespace flarevt::detail {

/// log1p(shape * z) / shape, continuous through shape = 0.
/// Inside the light-tail band the two-term expansion z - shape z^2/2 + shape^2 z^3/3
/// is used; it reduces to the exponential/Gumbel limit z at shape = 0.
inline double log1p_over(double shape, double z) {
  if (std::abs(shape) < kShapeTolerance && std::abs(shape * z) < 1e-4) {
    return z * (1.0 - shape * z / 2.0 + shape * shape * z * z / 3.0);
  }
  return std::log1p(shape * z) / shape;
}

/// expm1(shape * L) / shape, continuous through shape = 0 (limit L).
inline double expm1_over(double shape, double L) {
  if (std::abs(shape) < kShapeTolerance && std::abs(shape * L) < 1e-4) {
    return L * (1.0 + shape * L / 2.0 + shape * shape * L * L / 6.0);
  }
  return std::expm1(shape * L) / shape;
}

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Validates a GPD sample and returns its mean (the internal scaling unit).
double check_excesses(std::span<const double> excesses, std::size_t min_count);

/// Log-likelihood of unit-scaled excesses at (shape, scale); -inf off support.
double gpd_loglik_raw(double shape, double scale, std::span<const double> z);

}  // namespace flarevt::detail
