#include <benchmark/benchmark.h>

#include "flarevt/distributions.hpp"
#include "flarevt/inference.hpp"
#include "flarevt/seasonality.hpp"
#include "flarevt/synthetic.hpp"
#include "flarevt/threshold.hpp"

using namespace flarevt;

namespace {

std::vector<double> excesses(std::size_t n) {
  Rng rng(42);
  return sample_gpd({0.12, 5e-4, 0.0}, n, rng);
}

void BM_GpdLoglik(benchmark::State& state) {
  const auto y = excesses(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gpd_loglik({0.12, 5e-4, 0.0}, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GpdLoglik)->Arg(93)->Arg(5000);

void BM_FitGpd(benchmark::State& state) {
  const auto y = excesses(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_gpd(y));
}
BENCHMARK(BM_FitGpd)->Arg(93)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_ProfileShape(benchmark::State& state) {
  const auto y = excesses(static_cast<std::size_t>(state.range(0)));
  const auto fit = fit_gpd(y);
  for (auto _ : state) benchmark::DoNotOptimize(profile_ci(y, fit, ShapeTarget{}, 0.95));
}
BENCHMARK(BM_ProfileShape)->Arg(93)->Arg(5000)->Unit(benchmark::kMicrosecond);

void BM_ProfileReturnLevel(benchmark::State& state) {
  const auto y = excesses(93);
  const auto fit = fit_gpd(y, {.threshold = 5e-4, .n_total = 75558, .init = std::nullopt});
  for (auto _ : state) {
    benchmark::DoNotOptimize(profile_ci(y, fit, ReturnLevelTarget{110.0, 1799.0}, 0.95));
  }
}
BENCHMARK(BM_ProfileReturnLevel)->Unit(benchmark::kMicrosecond);

void BM_ParameterStability(benchmark::State& state) {
  Rng rng(7);
  const auto x = sample_gpd({0.12, 5e-4, 5e-4}, 20000, rng);
  const auto grid = default_threshold_grid(x);
  for (auto _ : state) benchmark::DoNotOptimize(parameter_stability(x, grid));
}
BENCHMARK(BM_ParameterStability)->Unit(benchmark::kMillisecond);

void BM_Periodogram(benchmark::State& state) {
  Rng rng(3);
  const Tone tones[] = {{11.0, 1.0, 0.0}, {14.0, 0.7, 1.0}};
  const auto x = sample_tone_series(static_cast<std::size_t>(state.range(0)), kMonthYears, tones,
                                    5.0, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(periodogram(x, kMonthYears));
}
BENCHMARK(BM_Periodogram)->Arg(504)->Arg(1848)->Unit(benchmark::kMicrosecond);

void BM_RunsExtremalIndex(benchmark::State& state) {
  Rng rng(5);
  const auto x = sample_moving_maximum(75558, 3, rng);
  const double u = empirical_quantile(x, 0.99);
  for (auto _ : state) benchmark::DoNotOptimize(runs_extremal_index(x, u, 1));
}
BENCHMARK(BM_RunsExtremalIndex)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
