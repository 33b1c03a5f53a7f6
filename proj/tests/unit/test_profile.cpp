#include <doctest.h>

#include <cmath>

#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"
#include "flarevt/inference.hpp"
#include "flarevt/synthetic.hpp"
#include "oracles.hpp"

using namespace flarevt;

namespace {

std::vector<double> excesses_from(const GpdParams& p, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  auto x = sample_gpd({p.shape, p.scale, 0.0}, n, rng);
  return x;
}

}  // namespace

TEST_CASE("chi-square and normal critical values") {
  CHECK(chi_square_1_quantile(0.95) == doctest::Approx(3.841458820694124).epsilon(1e-12));
  CHECK(normal_critical_value(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("profile over scale at fixed shape is the conditional maximum") {
  const auto y = excesses_from({0.2, 1.0, 0.0}, 400, 5);
  for (double shape : {-0.3, 0.0, 0.2, 0.6}) {
    const auto p = gpd_profile_shape(y, shape);
    const double ll = gpd_loglik({shape, p.scale, 0.0}, y);
    CHECK(p.loglik == doctest::Approx(ll).epsilon(1e-12));
    for (double f : {0.98, 0.999, 1.001, 1.02}) {
      CHECK(gpd_loglik({shape, p.scale * f, 0.0}, y) <= ll);
    }
  }
  CHECK_THROWS_AS(gpd_profile_shape(y, -1.0), DomainError);
}

TEST_CASE("shape profile interval brackets the MLE at the chi-square cutoff") {
  const auto y = excesses_from({0.12, 5e-4, 0.0}, 300, 9);
  const auto fit = fit_gpd(y);
  REQUIRE(fit.converged);
  const auto ci = profile_ci(y, fit, ShapeTarget{}, 0.95);
  CHECK(ci.parameter == "shape");
  CHECK(ci.lower_found);
  CHECK(ci.upper_found);
  CHECK(ci.lower <= ci.mle);
  CHECK(ci.mle <= ci.upper);
  const double cutoff = chi_square_1_quantile(0.95);
  for (double end : {ci.lower, ci.upper}) {
    const double dev = 2 * (fit.loglik - gpd_profile_shape(y, end).loglik);
    CHECK(dev == doctest::Approx(cutoff).epsilon(1e-4));
  }
  // Right-skewed: profile interval is wider above the MLE than the Wald interval suggests below.
  CHECK(ci.upper - ci.mle > 0.0);
  const auto narrow = profile_ci(y, fit, ShapeTarget{}, 0.8);
  CHECK(narrow.lower > ci.lower);
  CHECK(narrow.upper < ci.upper);
}

TEST_CASE("profile_ci preconditions") {
  const auto y = excesses_from({0.12, 1.0, 0.0}, 100, 4);
  auto fit = fit_gpd(y);
  CHECK_THROWS_AS(profile_ci(y, fit, ShapeTarget{}, 0.4), DomainError);
  CHECK_THROWS_AS(profile_ci(y, fit, ShapeTarget{}, 1.0), DomainError);
  fit.converged = false;
  CHECK_THROWS_AS(profile_ci(y, fit, ShapeTarget{}, 0.95), StateError);
}

TEST_CASE("return-level profile interval contains the point estimate") {
  const auto y = excesses_from({0.12, 5e-4, 0.0}, 93, 21);
  auto fit = fit_gpd(y, {.threshold = 5e-4, .n_total = 75558, .init = std::nullopt});
  REQUIRE(fit.converged);
  for (double N : {11.0, 38.0, 110.0}) {
    const auto ci = profile_ci(y, fit, ReturnLevelTarget{N, 1799.0}, 0.95);
    const double z = return_level(fit, N, 1799.0);
    CHECK(ci.parameter == "return_level");
    CHECK(ci.mle == doctest::Approx(z).epsilon(1e-12));
    CHECK(ci.lower < z);
    CHECK(ci.upper > z);
    CHECK(ci.lower > fit.params.threshold);
  }
  CHECK_THROWS_AS(profile_ci(y, fit, ReturnLevelTarget{1e-3, 1799.0}, 0.95), DomainError);
}

TEST_CASE("shape interval coverage on exact GPD samples") {
  // Coverage oracle: 100 seeded replicates, nominal 95%.
  int covered = 0;
  for (int r = 0; r < 100; ++r) {
    const auto y = excesses_from({0.12, 5e-4, 0.0}, 500, 1000 + r);
    const auto fit = fit_gpd(y);
    REQUIRE(fit.converged);
    const auto ci = profile_ci(y, fit, ShapeTarget{}, 0.95);
    covered += (ci.lower <= 0.12 && 0.12 <= ci.upper) ? 1 : 0;
  }
  CHECK(covered >= 90);
}
