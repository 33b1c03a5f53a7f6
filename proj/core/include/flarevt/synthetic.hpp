#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "flarevt/catalog.hpp"
#include "flarevt/distributions.hpp"

namespace flarevt {

/// Seeded generator with platform-independent uniform and normal draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal (Box-Muller).
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// threshold + GPD excesses, drawn by quantile inversion.
std::vector<double> sample_gpd(const GpdParams& params, std::size_t n, Rng& rng);
std::vector<double> sample_gev(const GevParams& params, std::size_t n, Rng& rng);
std::vector<double> sample_exponential(double scale, std::size_t n, Rng& rng);

/// X_t = max(Z_t, ..., Z_{t+window-1}) over iid unit-Frechet Z; extremal index 1/window.
std::vector<double> sample_moving_maximum(std::size_t n, std::size_t window, Rng& rng);

struct Tone {
  double period_years = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// offset + sum_i a_i sin(2 pi t / P_i + phi_i) + N(0, noise_sd^2) sampled at
/// bin centres t = (k + 1/2) * bin_width.
std::vector<double> sample_tone_series(std::size_t n, double bin_width_years,
                                       std::span<const Tone> tones, double offset,
                                       double noise_sd, Rng& rng);

/// Events evenly spaced from `start` at `per_year` events per year.
Catalog make_catalog(std::span<const double> fluxes, Timestamp start, double per_year);

/// Inhomogeneous Poisson event times (thinning) with rate
/// base_rate * (1 + sum_i a_i sin(2 pi t / P_i + phi_i)), clipped at 0,
/// carrying GPD fluxes. Tone amplitudes are relative.
Catalog sample_modulated_catalog(double years, double base_rate, std::span<const Tone> tones,
                                 const GpdParams& flux_law, Timestamp start, Rng& rng);

}  // namespace flarevt
