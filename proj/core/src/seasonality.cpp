#include "flarevt/seasonality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "flarevt/error.hpp"
#include "flarevt/optimize.hpp"

namespace flarevt {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Eigen::MatrixXd design(std::span<const double> t, std::span<const double> omegas) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const auto k = static_cast<Eigen::Index>(omegas.size());
  Eigen::MatrixXd x(n, 2 * k + 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double arg = omegas[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(r)];
      x(r, 2 * j) = std::sin(arg);
      x(r, 2 * j + 1) = std::cos(arg);
    }
    x(r, 2 * k) = 1.0;
  }
  return x;
}

struct LinearSolution {
  Eigen::VectorXd coef;
  double rss = 0.0;
  bool full_rank = true;
};

LinearSolution solve_linear(std::span<const double> t, std::span<const double> y,
                            std::span<const double> omegas) {
  const Eigen::MatrixXd x = design(t, omegas);
  const Eigen::Map<const Eigen::VectorXd> obs(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  LinearSolution s;
  s.full_rank = qr.rank() == x.cols();
  s.coef = qr.solve(obs);
  s.rss = (obs - x * s.coef).squaredNorm();
  return s;
}

}  // namespace

BinStatistic parse_bin_statistic(std::string_view name) {
  if (name == "count") return BinStatistic::count;
  if (name == "mean_flux") return BinStatistic::mean_flux;
  throw ParseError("unknown bin statistic '" + std::string(name) +
                   "' (expected count or mean_flux)");
}

BinnedSeries bin_series(const Catalog& catalog, double bin_width_years, BinStatistic statistic) {
  if (!(bin_width_years > 0.0)) throw DomainError("bin width must be positive");
  const double span = years_between(catalog.first_time(), catalog.last_time());
  const auto n_bins = static_cast<std::size_t>(std::floor(span / bin_width_years)) + 1;
  if (n_bins < 2) throw DataError("catalog span covers fewer than 2 bins");

  std::vector<double> sums(n_bins, 0.0);
  std::vector<std::size_t> counts(n_bins, 0);
  for (const auto& e : catalog.events()) {
    const double t = years_between(catalog.first_time(), e.timestamp);
    const auto b = std::min(static_cast<std::size_t>(t / bin_width_years), n_bins - 1);
    sums[b] += e.peak_flux;
    ++counts[b];
  }

  BinnedSeries s;
  s.origin = catalog.first_time();
  s.bin_width_years = bin_width_years;
  s.times.resize(n_bins);
  s.values.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    s.times[b] = (static_cast<double>(b) + 0.5) * bin_width_years;
  }
  if (statistic == BinStatistic::count) {
    for (std::size_t b = 0; b < n_bins; ++b) s.values[b] = static_cast<double>(counts[b]);
    return s;
  }

  std::vector<std::size_t> filled;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] > 0) {
      s.values[b] = sums[b] / static_cast<double>(counts[b]);
      filled.push_back(b);
    }
  }
  // Interpolate empty bins between filled neighbours; hold the ends flat.
  std::size_t next = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (counts[b] > 0) continue;
    s.interpolated.push_back(b);
    while (next < filled.size() && filled[next] < b) ++next;
    if (next == 0) {
      s.values[b] = s.values[filled.front()];
    } else if (next == filled.size()) {
      s.values[b] = s.values[filled.back()];
    } else {
      const std::size_t l = filled[next - 1], r = filled[next];
      const double w = static_cast<double>(b - l) / static_cast<double>(r - l);
      s.values[b] = (1.0 - w) * s.values[l] + w * s.values[r];
    }
  }
  return s;
}

Periodogram periodogram(std::span<const double> values, double bin_width_years) {
  const std::size_t n = values.size();
  if (n < 8) throw DataError("periodogram needs at least 8 samples");
  if (!(bin_width_years > 0.0)) throw DomainError("bin width must be positive");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    cos_table[j] = std::cos(a);
    sin_table[j] = std::sin(a);
  }

  Periodogram pg;
  pg.bin_width_years = bin_width_years;
  pg.n_bins = n;
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k <= half; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[j] - mean;
      re += v * cos_table[idx];
      im -= v * sin_table[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    const double weight = (2 * k == n) ? 1.0 : 2.0;
    pg.frequencies.push_back(static_cast<double>(k) /
                             (static_cast<double>(n) * bin_width_years));
    pg.power.push_back(weight * (re * re + im * im) / static_cast<double>(n));
  }
  return pg;
}

DominantFrequencies dominant_frequencies(const Periodogram& pg, std::size_t k) {
  if (k == 0) throw DomainError("need k >= 1 dominant frequencies");
  const auto& p = pg.power;
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool left = i == 0 || p[i] > p[i - 1];
    const bool right = i + 1 == p.size() || p[i] >= p[i + 1];
    if (left && right && p[i] > 0.0) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  DominantFrequencies out;
  for (std::size_t i = 0; i < std::min(k, peaks.size()); ++i) {
    out.omegas.push_back(kTwoPi * pg.frequencies[peaks[i]]);
  }
  if (peaks.size() < k) {
    out.notes.push_back("only " + std::to_string(peaks.size()) + " local maxima for k = " +
                        std::to_string(k));
  }
  return out;
}

double SeasonalModel::periodic(double t_years) const {
  double v = 0.0;
  for (const auto& c : components) {
    v += c.sin_coef * std::sin(c.omega * t_years) + c.cos_coef * std::cos(c.omega * t_years);
  }
  return v;
}

SeasonalFit fit_seasonal(const BinnedSeries& series, std::span<const double> omegas,
                         const SeasonalFitOptions& options) {
  const std::size_t k = omegas.size();
  if (series.values.size() != series.times.size()) throw DataError("series length mismatch");
  if (series.values.size() < 2 * k + 1) {
    throw DataError("harmonic fit needs at least 2k+1 samples");
  }
  for (double w : omegas) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("frequencies must be positive");
  }

  std::vector<double> freq(omegas.begin(), omegas.end());
  auto sol = solve_linear(series.times, series.values, freq);
  if (!sol.full_rank) throw DataError("rank-deficient harmonic design (duplicate frequencies?)");

  SeasonalFit fit;
  if (options.refine_frequencies && k > 0) {
    const Objective rss = [&](std::span<const double> w) {
      for (double v : w) {
        if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
      }
      const auto s = solve_linear(series.times, series.values, w);
      return s.full_rank ? s.rss : std::numeric_limits<double>::infinity();
    };
    std::vector<double> step(k);
    // A tenth of a Fourier bin in angular frequency.
    const double span = series.times.back() - series.times.front() + series.bin_width_years;
    for (auto& h : step) h = 0.1 * kTwoPi / span;
    const auto nm = nelder_mead(rss, freq, step);
    fit.converged = nm.converged;
    fit.iterations = nm.iterations;
    if (nm.value < sol.rss) {
      freq = nm.x;
      sol = solve_linear(series.times, series.values, freq);
    }
  }

  fit.model.origin = series.origin;
  for (std::size_t j = 0; j < k; ++j) {
    fit.model.components.push_back(
        {freq[j], sol.coef(static_cast<Eigen::Index>(2 * j)),
         sol.coef(static_cast<Eigen::Index>(2 * j + 1))});
  }
  fit.model.offset = sol.coef(static_cast<Eigen::Index>(2 * k));
  const double dof = static_cast<double>(series.values.size() - (2 * k + 1));
  fit.residual_variance = dof > 0.0 ? sol.rss / dof : 0.0;
  return fit;
}

Catalog deseasonalize(const Catalog& catalog, const SeasonalModel& model) {
  for (const auto& c : model.components) {
    if (!std::isfinite(c.omega) || !std::isfinite(c.sin_coef) || !std::isfinite(c.cos_coef)) {
      throw DomainError("seasonal model has non-finite coefficients");
    }
  }
  std::vector<FlareEvent> events(catalog.events().begin(), catalog.events().end());
  for (auto& e : events) {
    const double t = years_between(model.origin, e.timestamp);
    const double v = model.periodic(t);
    if (v != 0.0) e.peak_flux = std::max(e.peak_flux - v, kDeseasonFloor);
  }
  return Catalog::from_events(std::move(events), catalog.scaling_applied());
}

}  // namespace flarevt
