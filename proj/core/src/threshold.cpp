#include "flarevt/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flarevt/error.hpp"

namespace flarevt {

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("threshold grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("threshold grid must be strictly ascending");
  }
}

std::string note(double u, std::size_t n, std::size_t needed) {
  std::ostringstream os;
  os << "u=" << u << " dropped: " << n << " exceedances (< " << needed << ")";
  return os.str();
}

}  // namespace

ExceedanceSet select_exceedances(std::span<const double> values, double threshold) {
  ExceedanceSet set;
  set.threshold = threshold;
  set.n_total = values.size();
  for (double x : values) {
    if (x > threshold) set.excesses.push_back(x - threshold);
  }
  if (set.excesses.empty()) {
    std::ostringstream os;
    os << "zero exceedances: no observations exceed threshold " << threshold;
    if (!values.empty()) os << " (data maximum " << *std::max_element(values.begin(), values.end()) << ")";
    throw DataError(os.str());
  }
  return set;
}

ExceedanceSet select_exceedances(const Catalog& catalog, double threshold) {
  const auto fluxes = catalog.fluxes();
  ExceedanceSet set = select_exceedances(fluxes, threshold);
  set.span_years = catalog.span_years();
  set.n_y = catalog.n_y();
  return set;
}

Diagnostic<MrlPoint> mean_residual_life(std::span<const double> values,
                                        std::span<const double> grid, double confidence) {
  check_grid(grid);
  const double z = normal_critical_value(confidence);
  Diagnostic<MrlPoint> out;
  for (double u : grid) {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (double x : values) {
      if (x > u) {
        const double y = x - u;
        sum += y;
        sum_sq += y * y;
        ++n;
      }
    }
    if (n < kMinMrlExceedances) {
      out.notes.push_back(note(u, n, kMinMrlExceedances));
      continue;
    }
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;
    const double var = std::max((sum_sq - dn * mean * mean) / (dn - 1.0), 0.0);
    const double half = z * std::sqrt(var / dn);
    out.points.push_back({u, mean, mean - half, mean + half, n});
  }
  return out;
}

Diagnostic<StabilityPoint> parameter_stability(std::span<const double> values,
                                               std::span<const double> grid,
                                               double confidence) {
  check_grid(grid);
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must be in (0, 1)");
  Diagnostic<StabilityPoint> out;
  for (double u : grid) {
    std::vector<double> excesses;
    for (double x : values) {
      if (x > u) excesses.push_back(x - u);
    }
    if (excesses.size() < kMinStabilityExceedances) {
      out.notes.push_back(note(u, excesses.size(), kMinStabilityExceedances));
      continue;
    }
    StabilityPoint p;
    p.u = u;
    p.n_exceed = excesses.size();
    try {
      const GpdFit fit = fit_gpd(excesses, {.threshold = u, .n_total = values.size(), .init = std::nullopt});
      p.shape = fit.params.shape;
      p.modified_scale = fit.params.scale - fit.params.shape * u;
      p.se_shape = fit.se_shape;
      // Delta method for scale - shape * u.
      const double var = fit.cov[1][1] - 2.0 * u * fit.cov[0][1] + u * u * fit.cov[0][0];
      p.se_mod_scale = std::sqrt(std::max(var, 0.0));
      p.converged = fit.converged;
      if (!fit.converged) {
        std::ostringstream os;
        os << "u=" << u << ": fit did not converge";
        out.notes.push_back(os.str());
      }
    } catch (const DataError& e) {
      std::ostringstream os;
      os << "u=" << u << ": " << e.what();
      out.notes.push_back(os.str());
      continue;
    }
    out.points.push_back(p);
  }
  return out;
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must be in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("grid needs n >= 2 and lo < hi");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

std::vector<double> default_threshold_grid(std::span<const double> values, std::size_t count,
                                           double lower_quantile, double upper_quantile) {
  return linear_grid(empirical_quantile(values, lower_quantile),
                     empirical_quantile(values, upper_quantile), count);
}

std::vector<Cluster> runs_clusters(std::span<const double> values, double threshold,
                                   std::size_t run_length) {
  if (run_length == 0) throw DomainError("run length must be at least 1");
  std::vector<Cluster> clusters;
  std::size_t last_exceed = 0;
  bool any = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > threshold)) continue;
    // Non-exceedances strictly between the previous exceedance and this one.
    if (any && i - last_exceed - 1 < run_length) {
      auto& c = clusters.back();
      c.last = i;
      if (values[i] > values[c.peak]) c.peak = i;
    } else {
      clusters.push_back({i, i, i});
    }
    last_exceed = i;
    any = true;
  }
  return clusters;
}

ExtremalIndexResult runs_extremal_index(std::span<const double> values, double threshold,
                                        std::size_t run_length) {
  const auto clusters = runs_clusters(values, threshold, run_length);
  std::size_t n_exceed = 0;
  for (double x : values) n_exceed += x > threshold ? 1 : 0;
  if (n_exceed == 0) throw DataError("no observations exceed the threshold");
  ExtremalIndexResult r;
  r.n_exceed = n_exceed;
  r.n_clusters = clusters.size();
  r.run_length = run_length;
  r.theta = static_cast<double>(r.n_clusters) / static_cast<double>(r.n_exceed);
  return r;
}

ExtremalIndexResult runs_extremal_index(const Catalog& catalog, double threshold,
                                        std::size_t run_length) {
  return runs_extremal_index(catalog.fluxes(), threshold, run_length);
}

std::vector<double> decluster(std::span<const double> values, double threshold,
                              std::size_t run_length) {
  const auto clusters = runs_clusters(values, threshold, run_length);
  if (clusters.empty()) throw DataError("no observations exceed the threshold");
  std::vector<double> peaks;
  peaks.reserve(clusters.size());
  for (const auto& c : clusters) peaks.push_back(values[c.peak]);
  return peaks;
}

Catalog decluster(const Catalog& catalog, double threshold, std::size_t run_length) {
  const auto fluxes = catalog.fluxes();
  const auto clusters = runs_clusters(fluxes, threshold, run_length);
  if (clusters.empty()) throw DataError("no observations exceed the threshold");
  std::vector<FlareEvent> peaks;
  peaks.reserve(clusters.size());
  for (const auto& c : clusters) peaks.push_back(catalog.events()[c.peak]);
  return Catalog::from_events(std::move(peaks), catalog.scaling_applied());
}

}  // namespace flarevt
