#include <doctest.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "flarevt/distributions.hpp"
#include "flarevt/error.hpp"
#include "flarevt/serialize.hpp"
#include "flarevt/synthetic.hpp"
#include "flarevt/time.hpp"

using namespace flarevt;

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 3.074170119789064e-3, -2.5e-300, 1e300, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("fit document round-trip") {
  Rng rng(9);
  const auto y = sample_gpd({0.12, 5e-4, 0.0}, 150, rng);
  FitDocument doc;
  doc.fit = fit_gpd(y, {.threshold = 5e-4, .n_total = 75558, .init = std::nullopt});
  doc.excesses = y;
  doc.n_total = 75558;
  doc.span_years = 42.0;
  doc.n_y = 1799.0;
  doc.shape_ci = profile_ci(y, doc.fit, ShapeTarget{}, 0.95);
  doc.extremal_index = ExtremalIndexResult{0.9, 150, 135, 2};

  const std::string text = to_json(doc);
  const auto back = fit_document_from_json(text);
  CHECK(back.fit.params.shape == doc.fit.params.shape);
  CHECK(back.fit.params.scale == doc.fit.params.scale);
  CHECK(back.fit.params.threshold == doc.fit.params.threshold);
  CHECK(back.fit.loglik == doc.fit.loglik);
  CHECK(back.fit.cov[0][1] == doc.fit.cov[0][1]);
  CHECK(back.fit.zeta_u == doc.fit.zeta_u);
  CHECK(back.fit.converged == doc.fit.converged);
  CHECK(back.excesses == doc.excesses);
  CHECK(back.n_total == doc.n_total);
  CHECK(back.n_y == doc.n_y);
  REQUIRE(back.shape_ci.has_value());
  CHECK(back.shape_ci->lower == doc.shape_ci->lower);
  CHECK(back.shape_ci->upper == doc.shape_ci->upper);
  REQUIRE(back.extremal_index.has_value());
  CHECK(back.extremal_index->n_clusters == 135);
  CHECK(to_json(back) == text);
}

TEST_CASE("gev fit and seasonal model round-trip") {
  Rng rng(10);
  const auto fit = fit_gev(sample_gev({0.0, 1.0, 0.1}, 300, rng));
  const auto g = gev_fit_from_json(to_json(fit));
  CHECK(g.params.location == fit.params.location);
  CHECK(g.params.shape == fit.params.shape);
  CHECK(g.cov[2][1] == fit.cov[2][1]);

  SeasonalModel m;
  m.origin = make_timestamp(1975, 11, 1);
  m.components = {{0.571, 1e-6, -2e-7}, {0.449, 3e-7, 4e-7}};
  m.offset = 2e-6;
  const auto back = seasonal_model_from_json(to_json(m));
  CHECK(back.origin == m.origin);
  REQUIRE(back.components.size() == 2);
  CHECK(back.components[1].omega == 0.449);
  CHECK(back.offset == m.offset);
}

TEST_CASE("readers reject foreign versions and malformed input") {
  SeasonalModel m;
  m.origin = make_timestamp(2000, 1, 1);
  auto j = nlohmann::json::parse(to_json(m));
  j["version"] = kDocumentVersion + 1;
  CHECK_THROWS_AS(seasonal_model_from_json(j.dump()), ParseError);
  CHECK_THROWS_AS(fit_document_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(gpd_fit_from_json("{\"version\": 1}"), ParseError);
}

TEST_CASE("non-finite values are written as null") {
  GpdFit fit;
  fit.params = {0.1, 1.0, 0.0};
  fit.se_shape = std::numeric_limits<double>::quiet_NaN();
  const auto j = nlohmann::json::parse(to_json(fit));
  CHECK(j.dump().find("null") != std::string::npos);
  CHECK(std::isnan(gpd_fit_from_json(j.dump()).se_shape));
}
