#include "flarevt/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "flarevt/error.hpp"

namespace flarevt {

namespace {

void require_converged(const GpdFit& fit) {
  if (!fit.converged) throw StateError("inference requires a converged fit");
}

}  // namespace

double return_level(const GpdFit& fit, double years, double n_y) {
  require_converged(fit);
  if (!(years > 0.0) || !(n_y > 0.0)) throw DomainError("return level needs N > 0 and n_y > 0");
  const double m = years * n_y * fit.zeta_u;
  if (!(m > 1.0)) {
    throw DomainError("return level below threshold: N * n_y * zeta_u must exceed 1");
  }
  const auto& p = fit.params;
  return p.threshold + p.scale * detail::expm1_over(p.shape, std::log(m));
}

double exceedance_probability(const GpdFit& fit, double level) {
  if (level < fit.params.threshold) {
    throw DomainError("model exceedance probability requires level >= threshold");
  }
  return fit.zeta_u * gpd_survival(fit.params, level - fit.params.threshold);
}

double return_period(const GpdFit& fit, double level, double n_y) {
  require_converged(fit);
  if (!(level > fit.params.threshold)) throw DomainError("return period requires level > threshold");
  if (!(n_y > 0.0)) throw DomainError("return period needs n_y > 0");
  const auto& p = fit.params;
  const double t = (level - p.threshold) / p.scale;
  if (1.0 + p.shape * t <= 0.0) return std::numeric_limits<double>::infinity();
  // N = exp(log1p(shape t) / shape) / (n_y zeta_u): the inverse of return_level.
  return std::exp(detail::log1p_over(p.shape, t)) / (n_y * fit.zeta_u);
}

ReturnLevelCurve return_curve(std::span<const double> excesses, const GpdFit& fit,
                              std::span<const double> years, double n_y, double confidence) {
  require_converged(fit);
  ReturnLevelCurve curve;
  curve.fit = fit;
  curve.n_y = n_y;
  curve.confidence = confidence;
  for (double N : years) {
    ReturnLevelPoint point;
    point.years = N;
    point.level = return_level(fit, N, n_y);
    try {
      const auto ci = profile_ci(excesses, fit, ReturnLevelTarget{N, n_y}, confidence);
      point.ci_low = ci.lower;
      point.ci_high = ci.upper;
      point.ci_ok = ci.lower_found && ci.upper_found;
    } catch (const Error&) {
      point.ci_low = point.ci_high = point.level;
      point.ci_ok = false;
    }
    curve.points.push_back(point);
  }
  return curve;
}

double probability_at_least_one(double p_single, double trials) {
  if (!(p_single >= 0.0 && p_single <= 1.0)) throw DomainError("probability must be in [0, 1]");
  if (p_single == 1.0) return 1.0;
  return -std::expm1(trials * std::log1p(-p_single));
}

CycleForecast cycle_forecast(const GpdFit& fit, std::span<const double> levels, double n_y,
                             double cycle_years, std::span<const double> catalog_fluxes) {
  require_converged(fit);
  if (!(n_y > 0.0) || !(cycle_years > 0.0)) throw DomainError("cycle forecast needs n_y, cycle > 0");
  std::vector<double> sorted(catalog_fluxes.begin(), catalog_fluxes.end());
  std::sort(sorted.begin(), sorted.end());
  const double trials = n_y * cycle_years;

  CycleForecast out;
  out.n_y = n_y;
  out.cycle_years = cycle_years;
  for (double x : levels) {
    CyclePoint p;
    p.level = x;
    if (x > fit.params.threshold) {
      p.p_single = exceedance_probability(fit, x);
      p.model = true;
    } else {
      p.model = false;
      if (!sorted.empty()) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        p.p_single = static_cast<double>(above) / static_cast<double>(sorted.size());
      }
    }
    p.p_cycle = probability_at_least_one(p.p_single, trials);
    p.expected_count = p.p_single * trials;
    out.points.push_back(p);
  }
  return out;
}

double decade_probability(const GpdFit& fit, double level, double n_y, double years) {
  require_converged(fit);
  if (!(level > fit.params.threshold)) throw DomainError("decade probability requires level > threshold");
  return probability_at_least_one(exceedance_probability(fit, level), n_y * years);
}

double decade_probability_annual(const GpdFit& fit, double level, double n_y, double years) {
  const double period = return_period(fit, level, n_y);
  if (!std::isfinite(period)) return 0.0;
  const double annual = std::min(1.0 / period, 1.0);
  return probability_at_least_one(annual, years);
}

FitDiagnostics diagnostics(const GpdFit& fit, std::span<const double> excesses,
                           std::size_t density_bins) {
  FitDiagnostics out;
  if (excesses.empty()) return out;
  std::vector<double> y(excesses.begin(), excesses.end());
  std::sort(y.begin(), y.end());
  const std::size_t n = y.size();
  const double dn = static_cast<double>(n);
  const auto& p = fit.params;

  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i + 1) / (dn + 1.0);
    out.pp.push_back({pos, gpd_cdf(p, y[i])});
    out.qq.push_back({gpd_quantile(p, pos), y[i]});
    const double level = p.threshold + y[i];
    const double emp = fit.zeta_u * (dn + 1.0 - static_cast<double>(i + 1)) / (dn + 1.0);
    const double model = fit.zeta_u * gpd_survival(p, y[i]);
    if (level > 0.0 && model > 0.0) {
      out.loglog.push_back({std::log10(level), std::log10(emp), std::log10(model)});
    }
  }

  const std::size_t bins =
      density_bins > 0 ? density_bins
                       : std::max<std::size_t>(5, static_cast<std::size_t>(std::ceil(std::sqrt(dn))));
  const double width = y.back() / static_cast<double>(bins);
  if (width > 0.0) {
    std::vector<std::size_t> counts(bins, 0);
    for (double v : y) {
      auto b = static_cast<std::size_t>(v / width);
      counts[std::min(b, bins - 1)]++;
    }
    for (std::size_t b = 0; b < bins; ++b) {
      const double lo = width * static_cast<double>(b);
      const double hi = lo + width;
      DensityBin bin;
      bin.center = 0.5 * (lo + hi);
      bin.empirical = static_cast<double>(counts[b]) / (dn * width);
      // Average model density over the bin, so both columns are bin masses / width.
      bin.model = (gpd_cdf(p, hi) - gpd_cdf(p, lo)) / width;
      out.density.push_back(bin);
    }
  }
  return out;
}

LineFit least_squares_line(std::span<const PlotPoint> points) {
  if (points.size() < 2) throw DataError("line fit needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (!(sxx > 0.0)) throw DataError("line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace flarevt
