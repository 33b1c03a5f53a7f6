#include "flarevt/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "flarevt/error.hpp"

namespace flarevt {

namespace {

using Point = std::vector<double>;

struct Simplex {
  std::vector<Point> vertices;
  std::vector<double> values;
};

Simplex make_simplex(const Objective& f, const Point& x0, std::span<const double> step) {
  const std::size_t n = x0.size();
  Simplex s;
  s.vertices.assign(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) s.vertices[i + 1][i] += step[i];
  s.values.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s.values[i] = f(s.vertices[i]);
  return s;
}

void order(Simplex& s) {
  std::vector<std::size_t> idx(s.values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
  Simplex sorted;
  for (auto i : idx) {
    sorted.vertices.push_back(std::move(s.vertices[i]));
    sorted.values.push_back(s.values[i]);
  }
  s = std::move(sorted);
}

bool simplex_converged(const Simplex& s, const NelderMeadOptions& opt) {
  const double best = s.values.front();
  const double worst = s.values.back();
  if (!std::isfinite(best) || !std::isfinite(worst)) return false;
  if (worst - best > opt.rel_f_tol * std::max(std::abs(best), 1.0)) return false;
  for (std::size_t v = 1; v < s.vertices.size(); ++v) {
    for (std::size_t i = 0; i < s.vertices[v].size(); ++i) {
      if (std::abs(s.vertices[v][i] - s.vertices[0][i]) > opt.x_tol) return false;
    }
  }
  return true;
}

Point affine(const Point& centroid, const Point& toward, double coef) {
  Point out(centroid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = centroid[i] + coef * (toward[i] - centroid[i]);
  }
  return out;
}

// Runs one Nelder-Mead descent until convergence or the iteration budget is spent.
bool descend(const Objective& f, Simplex& s, const NelderMeadOptions& opt, int& iterations) {
  const std::size_t n = s.vertices.size() - 1;
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  order(s);
  while (iterations < opt.max_iterations) {
    if (simplex_converged(s, opt)) return true;
    ++iterations;

    Point centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s.vertices[v][i] / double(n);
    }
    const Point& worst = s.vertices[n];
    const Point reflected = affine(centroid, worst, -kReflect);
    const double f_reflected = f(reflected);

    if (f_reflected < s.values[0]) {
      Point expanded = affine(centroid, worst, -kExpand);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        s.vertices[n] = std::move(expanded);
        s.values[n] = f_expanded;
      } else {
        s.vertices[n] = reflected;
        s.values[n] = f_reflected;
      }
    } else if (f_reflected < s.values[n - 1]) {
      s.vertices[n] = reflected;
      s.values[n] = f_reflected;
    } else {
      const bool outside = f_reflected < s.values[n];
      Point contracted = outside ? affine(centroid, reflected, kContract)
                                 : affine(centroid, worst, kContract);
      const double f_contracted = f(contracted);
      if (f_contracted < std::min(f_reflected, s.values[n])) {
        s.vertices[n] = std::move(contracted);
        s.values[n] = f_contracted;
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          s.vertices[v] = affine(s.vertices[0], s.vertices[v], kShrink);
          s.values[v] = f(s.vertices[v]);
        }
      }
    }
    order(s);
  }
  return simplex_converged(s, opt);
}

std::vector<double> steps_for(std::span<const double> x) {
  std::vector<double> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = std::max(1e-5, 1e-4 * std::abs(x[i]));
  return h;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             std::span<const double> step, const NelderMeadOptions& options) {
  if (x0.empty()) throw DomainError("nelder_mead: empty parameter vector");
  if (step.size() != x0.size()) throw DomainError("nelder_mead: step size mismatch");
  if (!std::isfinite(f(x0))) throw DomainError("nelder_mead: objective not finite at start");

  int iterations = 0;
  Simplex s = make_simplex(f, x0, step);
  bool converged = descend(f, s, options, iterations);

  // A collapsed simplex can stall away from the optimum; restart around the
  // best vertex and accept once a restart no longer improves it.
  for (int r = 0; converged && r < options.restarts; ++r) {
    const double before = s.values.front();
    std::vector<double> small_step(step.begin(), step.end());
    for (auto& h : small_step) h *= 0.1;
    Simplex fresh = make_simplex(f, s.vertices.front(), small_step);
    converged = descend(f, fresh, options, iterations);
    const double gain = before - fresh.values.front();
    if (fresh.values.front() <= s.values.front()) s = std::move(fresh);
    if (gain <= options.rel_f_tol * std::max(std::abs(before), 1.0)) break;
  }

  NelderMeadResult result;
  result.x = s.vertices.front();
  result.value = s.values.front();
  result.iterations = iterations;
  result.converged = converged && std::isfinite(result.value);
  return result;
}

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x) {
  const std::size_t n = x.size();
  const auto h = steps_for(x);
  std::vector<double> g(n);
  std::vector<double> p(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = x[i] + h[i];
    const double fp = f(p);
    p[i] = x[i] - h[i];
    const double fm = f(p);
    p[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h[i]);
  }
  return g;
}

std::vector<double> numerical_hessian(const Objective& f, std::span<const double> x) {
  const std::size_t n = x.size();
  const auto h = steps_for(x);
  std::vector<double> hess(n * n);
  std::vector<double> p(x.begin(), x.end());
  const double f0 = f(p);
  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    p[i] += di;
    p[j] += dj;
    const double v = f(p);
    p[i] = x[i];
    p[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = eval(i, h[i], i, 0.0);
    const double fm = eval(i, -h[i], i, 0.0);
    hess[i * n + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double fpp = eval(i, h[i], j, h[j]);
      const double fpm = eval(i, h[i], j, -h[j]);
      const double fmp = eval(i, -h[i], j, h[j]);
      const double fmm = eval(i, -h[i], j, -h[j]);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      hess[i * n + j] = v;
      hess[j * n + i] = v;
    }
  }
  return hess;
}

std::vector<double> invert_spd(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) throw DomainError("invert_spd: size mismatch");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (a[i * n + j] + a[j * n + i]);
  }
  if (!m.allFinite()) return {};
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return {};
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = 0.5 * (inv(i, j) + inv(j, i));
  }
  return out;
}

}  // namespace flarevt
