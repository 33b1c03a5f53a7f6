#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flarevt {

/// Objective for minimization. May return +infinity outside the feasible set.
using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  /// Stop when the simplex function spread is below rel_f_tol * (|f_best| + 1e-300)...
  double rel_f_tol = 1e-10;
  /// ...and every vertex lies within x_tol (max-norm) of the best vertex.
  double x_tol = 1e-8;
  int max_iterations = 500;
  /// Restart from a fresh simplex around the best point after convergence,
  /// accepting only when the restart does not move the optimum.
  int restarts = 2;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free minimization (Nelder & Mead, standard coefficients
/// 1, 2, 1/2, 1/2). `step` gives the initial simplex edge per coordinate.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             std::span<const double> step,
                             const NelderMeadOptions& options = {});

/// Central-difference Hessian of `f` at `x`, row-major n*n.
/// Step per coordinate: max(1e-5, 1e-4 * |x_i|).
std::vector<double> numerical_hessian(const Objective& f, std::span<const double> x);

/// Central-difference gradient with the same step rule as numerical_hessian.
std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x);

/// Inverts a symmetric positive-definite row-major n*n matrix.
/// Returns an empty vector when the matrix is not positive definite.
std::vector<double> invert_spd(std::span<const double> a, std::size_t n);

}  // namespace flarevt
