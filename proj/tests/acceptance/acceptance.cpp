// Acceptance suite: one PASS/FAIL line per criterion.
// Exit status is nonzero when any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "flarevt/block_maxima.hpp"
#include "flarevt/catalog.hpp"
#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"
#include "flarevt/inference.hpp"
#include "flarevt/seasonality.hpp"
#include "flarevt/synthetic.hpp"
#include "flarevt/threshold.hpp"
#include "flarevt/time.hpp"
#include "oracles.hpp"

using namespace flarevt;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Status { pass, fail, info };

struct Outcome {
  Status status = Status::fail;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Status::pass : Status::fail, std::move(detail)};
}

// 1. Synthetic GPD recovery and profile interval coverage.
Outcome gpd_recovery() {
  const double shape = 0.12, scale = 5e-4;
  double abs_err = 0.0;
  int covered = 0, converged = 0;
  for (int r = 0; r < 100; ++r) {
    Rng rng(10'000 + static_cast<std::uint64_t>(r));
    const auto y = sample_gpd({shape, scale, 0.0}, 5000, rng);
    const auto fit = fit_gpd(y);
    if (!fit.converged) continue;
    ++converged;
    abs_err += std::abs(fit.params.shape - shape);
    const auto ci = profile_ci(y, fit, ShapeTarget{}, 0.95);
    covered += (ci.lower <= shape && shape <= ci.upper) ? 1 : 0;
  }
  const double mean_err = abs_err / 100.0;
  return pass_if(converged == 100 && mean_err <= 0.02 && covered >= 90,
                 fmt("converged %d/100, mean |shape error| %.4f (<= 0.02), coverage %d/100 (>= 90)",
                     converged, mean_err, covered));
}

// 2. Maximum likelihood agrees with a brute-force grid search.
Outcome grid_oracle() {
  Rng rng(50);
  const auto y = sample_gpd({0.12, 5e-4, 0.0}, 50, rng);
  const auto fit = fit_gpd(y);
  double mean = 0.0;
  for (double v : y) mean += v / static_cast<double>(y.size());
  const auto g = oracle::grid_search(y, -0.5, 1.0, 0.2 * mean, 5.0 * mean, 400);
  const double ds = std::abs(fit.params.shape - g.shape) / g.d_shape;
  const double dc = std::abs(fit.params.scale - g.scale) / g.d_scale;
  return pass_if(fit.converged && ds <= 1.0 && dc <= 1.0 && fit.loglik >= g.loglik - 1e-9,
                 fmt("shape off by %.3f cells, scale off by %.3f cells (<= 1)", ds, dc));
}

// 3. Light-tail branches and quantile/cdf round trips.
Outcome analytic_limits() {
  double gpd_exp = 0.0, gpd_band = 0.0, gev_gumbel = 0.0, round_trip = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double t = 0.01 * i;  // y / scale in [0, 50]
    gpd_exp = std::max(gpd_exp, std::abs(gpd_cdf({0.0, 2.0, 0.0}, 2.0 * t) + std::expm1(-t)));
    gev_gumbel = std::max(gev_gumbel, std::abs(gev_cdf({1.0, 2.0, 0.0}, 1.0 + 2.0 * (t - 5.0)) -
                                               std::exp(-std::exp(-(t - 5.0)))));
    for (double s : {-9e-7, -1e-7, 1e-9, 3e-7, 9.99e-7}) {
      const double exact = static_cast<double>(oracle::gpd_cdf(s, 2.0L, 2.0L * t));
      gpd_band = std::max(gpd_band, std::abs(gpd_cdf({s, 2.0, 0.0}, 2.0 * t) - exact));
    }
  }
  for (double s : {-0.4, -1e-7, 0.0, 5e-7, 0.12, 0.6}) {
    for (int i = 1; i < 1000; ++i) {
      const double q = i / 1000.0;
      round_trip = std::max(round_trip, std::abs(gpd_cdf({s, 5e-4, 0.0},
                                                         gpd_quantile({s, 5e-4, 0.0}, q)) - q));
      round_trip = std::max(round_trip, std::abs(gev_cdf({0.0, 1.0, s},
                                                         gev_quantile({0.0, 1.0, s}, q)) - q));
    }
  }
  return pass_if(gpd_exp <= 1e-8 && gev_gumbel <= 1e-8 && gpd_band <= 1e-8 && round_trip <= 1e-10,
                 fmt("exponential %.1e, Gumbel %.1e, in-band vs exact %.1e (<= 1e-8); "
                     "round trip %.1e (<= 1e-10)",
                     gpd_exp, gev_gumbel, gpd_band, round_trip));
}

// 4. Return-level identities on a fitted model.
Outcome return_identities() {
  Rng rng(4);
  const auto y = sample_gpd({0.12, 5e-4, 0.0}, 93, rng);
  const auto fit = fit_gpd(y, {.threshold = 5e-4, .n_total = 75558, .init = std::nullopt});
  const double n_y = 1799.0;
  double surv = 0.0, period = 0.0;
  for (double N : {2.0, 11.0, 38.0, 110.0}) {
    const double z = return_level(fit, N, n_y);
    const double rate = fit.zeta_u * gpd_survival(fit.params, z - fit.params.threshold);
    surv = std::max(surv, std::abs(rate * N * n_y - 1.0));
    period = std::max(period, std::abs(return_period(fit, z, n_y) / N - 1.0));
  }
  return pass_if(fit.converged && surv <= 1e-10 && period <= 1e-9,
                 fmt("survival identity %.1e (<= 1e-10), period round trip %.1e (<= 1e-9)", surv,
                     period));
}

// 5. Extremal index on iid, moving-maximum and declustered series.
Outcome extremal_index() {
  Rng rng(5);
  const auto iid = sample_exponential(1.0, 10000, rng);
  const double theta_iid = runs_extremal_index(iid, empirical_quantile(iid, 0.95), 1).theta;

  const auto mm = sample_moving_maximum(50000, 3, rng);
  const double u = empirical_quantile(mm, 0.99);
  const double theta_mm = runs_extremal_index(mm, u, 1).theta;

  // Cluster peaks stay where they were; other cluster members drop to u.
  auto thinned = mm;
  for (const auto& c : runs_clusters(mm, u, 1)) {
    for (std::size_t i = c.first; i <= c.last; ++i) {
      if (i != c.peak) thinned[i] = std::min(thinned[i], u);
    }
  }
  const double theta_dc = runs_extremal_index(thinned, u, 1).theta;
  const bool count_ok = decluster(mm, u, 1).size() == runs_extremal_index(mm, u, 1).n_clusters;
  return pass_if(theta_iid >= 0.95 && std::abs(theta_mm - 1.0 / 3.0) <= 0.1 && theta_dc >= 0.95 &&
                     count_ok,
                 fmt("iid %.3f (>= 0.95), moving-max(3) %.3f (1/3 +- 0.1), declustered %.3f (>= 0.95)",
                     theta_iid, theta_mm, theta_dc));
}

struct ToneRecovery {
  double err11 = 0.0, err14 = 0.0, bin = 0.0, parseval = 0.0;
  std::size_t found = 0;
};

ToneRecovery two_tone(std::size_t years, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = years * 12;
  const Tone tones[] = {{11.0, 1.0, 0.4}, {14.0, 0.8, 2.1}};
  const auto x = sample_tone_series(n, kMonthYears, tones, 10.0, 0.5, rng);
  const auto pg = periodogram(x, kMonthYears);
  const auto dom = dominant_frequencies(pg, 2);
  ToneRecovery out;
  out.bin = kTwoPi / (static_cast<double>(n) * kMonthYears);
  out.found = dom.omegas.size();
  out.err11 = out.err14 = std::numeric_limits<double>::infinity();
  for (double w : dom.omegas) {
    out.err11 = std::min(out.err11, std::abs(w - kTwoPi / 11.0));
    out.err14 = std::min(out.err14, std::abs(w - kTwoPi / 14.0));
  }
  double mean = 0.0, ss = 0.0, total = 0.0;
  for (double v : x) mean += v / static_cast<double>(n);
  for (double v : x) ss += (v - mean) * (v - mean);
  for (double p : pg.power) total += p;
  out.parseval = std::abs(total - ss) / ss;
  return out;
}

// 6. Two-tone recovery and Parseval.
Outcome seasonality() {
  // 154 years puts both periods on exact Fourier bins (k = 14 and 11).
  const auto r = two_tone(154, 6);
  return pass_if(r.found == 2 && r.err11 <= r.bin && r.err14 <= r.bin && r.parseval <= 1e-8,
                 fmt("154 yr monthly: 11-yr error %.2f bins, 14-yr error %.2f bins (<= 1), "
                     "Parseval %.1e (<= 1e-8)",
                     r.err11 / r.bin, r.err14 / r.bin, r.parseval));
}

Outcome seasonality_short_record() {
  const auto r = two_tone(42, 6);
  const bool ok = r.found == 2 && r.err11 <= r.bin && r.err14 <= r.bin;
  return {Status::info,
          fmt("42 yr monthly (bins 1/42 yr^-1 apart): %s; 11-yr error %.2f bins, 14-yr error "
              "%.2f bins",
              ok ? "both recovered" : "not both resolved", r.err11 / r.bin, r.err14 / r.bin)};
}

// 7. Reproduction on the GOES catalog, when one is supplied.
Outcome goes_reproduction() {
  const char* path = std::getenv("FLAREVT_GOES_CATALOG");
  if (path == nullptr || *path == '\0') {
    return {Status::info, "skipped: set FLAREVT_GOES_CATALOG to a GOES event list "
                          "(NOAA fixed-column, or .csv) covering Nov 1975 - Oct 2017"};
  }
  const std::string p = path;
  const bool csv = p.size() > 4 && p.substr(p.size() - 4) == ".csv";
  auto loaded = load_catalog(p, csv ? CatalogFormat::csv : CatalogFormat::noaa_xrs);
  const auto lo = make_timestamp(1975, 11, 1), hi = make_timestamp(2017, 11, 1);
  std::vector<FlareEvent> window;
  for (const auto& e : loaded.catalog.events()) {
    if (e.timestamp >= lo && e.timestamp < hi) window.push_back(e);
  }
  auto cat = Catalog::from_events(std::move(window), loaded.catalog.scaling_applied());
  if (!cat.scaling_applied() && !csv) cat = apply_goes_scaling(cat);

  const double u = 5e-4;
  const auto set = select_exceedances(cat, u);
  const auto fit =
      fit_gpd(set.excesses, {.threshold = u, .n_total = cat.n_total(), .init = std::nullopt});
  const auto ci = profile_ci(set.excesses, fit, ShapeTarget{}, 0.95);
  const double n_y = cat.n_y();
  const double z38 = return_level(fit, 38, n_y), z110 = return_level(fit, 110, n_y);
  const double p45 = decade_probability(fit, 4.5e-3, n_y);
  const double p35 = decade_probability(fit, 3.5e-3, n_y);

  const auto n_exc = static_cast<long>(set.n_exceed());
  const bool ok = std::labs(n_exc - 93) <= 3 && std::abs(fit.params.shape - 0.12) <= 0.05 &&
                  std::abs(ci.lower + 0.017) <= 0.05 && std::abs(ci.upper - 0.3589) <= 0.05 &&
                  std::abs(z38 / 3.5e-3 - 1) <= 0.2 && std::abs(z110 / 4.5e-3 - 1) <= 0.2 &&
                  std::abs(p45 - 0.09) <= 0.03 && std::abs(p35 - 0.238) <= 0.05;
  Outcome out = pass_if(
      ok, fmt("n=%zu exceed=%ld shape=%.4f CI=(%.4f, %.4f) z38=%.3e z110=%.3e "
              "P10(X45)=%.3f P10(X35)=%.3f",
              cat.n_total(), n_exc, fit.params.shape, ci.lower, ci.upper, z38, z110, p45, p35));
  const char* gate = std::getenv("FLAREVT_GOES_GATE");
  if (gate == nullptr || std::string(gate) != "1") {
    out.detail = std::string(ok ? "[would pass] " : "[would fail] ") + out.detail;
    out.status = Status::info;
  }
  return out;
}

// 8. GEV shape from block maxima inside the GPD shape interval.
Outcome gev_gpd_duality() {
  Rng rng(8);
  const double shape = 0.25;
  const auto x = sample_gpd({shape, 1.0, 0.0}, 200'000, rng);
  const auto maxima = block_maxima(x, 200);
  const auto gev = fit_gev(maxima);
  const double u = empirical_quantile(x, 0.9975);
  const auto set = select_exceedances(x, u);
  const auto gpd =
      fit_gpd(set.excesses, {.threshold = u, .n_total = x.size(), .init = std::nullopt});
  const auto ci = profile_ci(set.excesses, gpd, ShapeTarget{}, 0.95);
  const double g = gev.params.shape;
  return pass_if(gev.converged && gpd.converged && ci.lower <= g && g <= ci.upper,
                 fmt("GEV shape %.4f from %zu block maxima; GPD shape %.4f, 95%% CI (%.4f, %.4f) "
                     "from %zu exceedances",
                     g, maxima.size(), gpd.params.shape, ci.lower, ci.upper, set.n_exceed()));
}

struct Criterion {
  const char* id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s;  // 0 means no limit
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1", "synthetic GPD recovery", gpd_recovery, 10.0},
      {"2", "likelihood grid oracle", grid_oracle, 5.0},
      {"3", "analytic limits", analytic_limits, 0.0},
      {"4", "return-level identity", return_identities, 0.0},
      {"5", "extremal index oracles", extremal_index, 0.0},
      {"6", "seasonality oracle", seasonality, 0.0},
      {"6b", "seasonality, 42-year record", seasonality_short_record, 0.0},
      {"7", "GOES reproduction", goes_reproduction, 0.0},
      {"8", "GEV/GPD duality", gev_gpd_duality, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Status::fail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s && out.status == Status::pass) {
      out.status = Status::fail;
      out.detail += fmt("; runtime over %.0f s", c.time_limit_s);
    }
    const char* tag = out.status == Status::pass ? "PASS" : out.status == Status::fail ? "FAIL"
                                                                                      : "INFO";
    if (out.status == Status::fail) ++failures;
    std::printf("%s [%s] %s: %s (%.2f s)\n", tag, c.id, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d gating failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
