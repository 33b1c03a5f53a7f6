#include "flarevt/synthetic.hpp"

#include <cmath>

#include "flarevt/error.hpp"

namespace flarevt {

double Rng::uniform() {
  // 53 random bits mapped to (0, 1); never returns 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = 2.0 * M_PI * uniform();
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<double> sample_gpd(const GpdParams& params, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = params.threshold + gpd_quantile(params, rng.uniform());
  return out;
}

std::vector<double> sample_gev(const GevParams& params, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = gev_quantile(params, rng.uniform());
  return out;
}

std::vector<double> sample_exponential(double scale, std::size_t n, Rng& rng) {
  if (!(scale > 0.0)) throw DomainError("exponential scale must be positive");
  std::vector<double> out(n);
  for (auto& v : out) v = -scale * std::log(rng.uniform());
  return out;
}

std::vector<double> sample_moving_maximum(std::size_t n, std::size_t window, Rng& rng) {
  if (window == 0) throw DomainError("moving-maximum window must be positive");
  std::vector<double> z(n + window - 1);
  for (auto& v : z) v = -1.0 / std::log(rng.uniform());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = z[i];
    for (std::size_t j = 1; j < window; ++j) m = std::max(m, z[i + j]);
    out[i] = m;
  }
  return out;
}

std::vector<double> sample_tone_series(std::size_t n, double bin_width_years,
                                       std::span<const Tone> tones, double offset,
                                       double noise_sd, Rng& rng) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * bin_width_years;
    double v = offset;
    for (const auto& tone : tones) {
      v += tone.amplitude * std::sin(2.0 * M_PI * t / tone.period_years + tone.phase);
    }
    out[k] = v + noise_sd * rng.normal();
  }
  return out;
}

Catalog make_catalog(std::span<const double> fluxes, Timestamp start, double per_year) {
  if (!(per_year > 0.0)) throw DomainError("event rate must be positive");
  std::vector<FlareEvent> events;
  events.reserve(fluxes.size());
  const double spacing = kSecondsPerYear / per_year;
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    const auto offset = std::chrono::seconds(
        static_cast<std::int64_t>(std::llround(spacing * static_cast<double>(i))));
    events.push_back({start + offset, fluxes[i], std::nullopt});
  }
  return Catalog::from_events(std::move(events));
}

Catalog sample_modulated_catalog(double years, double base_rate, std::span<const Tone> tones,
                                 const GpdParams& flux_law, Timestamp start, Rng& rng) {
  if (!(years > 0.0) || !(base_rate > 0.0)) throw DomainError("years and rate must be positive");
  double max_mod = 1.0;
  for (const auto& tone : tones) max_mod += std::abs(tone.amplitude);
  const double max_rate = base_rate * max_mod;

  std::vector<FlareEvent> events;
  double t = 0.0;
  while (true) {
    t += -std::log(rng.uniform()) / max_rate;
    if (t >= years) break;
    double mod = 1.0;
    for (const auto& tone : tones) {
      mod += tone.amplitude * std::sin(2.0 * M_PI * t / tone.period_years + tone.phase);
    }
    const double accept = std::max(mod, 0.0) / max_mod;
    if (rng.uniform() >= accept) continue;
    const auto offset =
        std::chrono::seconds(static_cast<std::int64_t>(std::llround(t * kSecondsPerYear)));
    events.push_back(
        {start + offset, flux_law.threshold + gpd_quantile(flux_law, rng.uniform()), std::nullopt});
  }
  if (events.empty()) throw DataError("modulated process produced no events");
  return Catalog::from_events(std::move(events));
}

}  // namespace flarevt
