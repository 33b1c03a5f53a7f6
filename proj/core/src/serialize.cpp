#include "flarevt/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "flarevt/error.hpp"

namespace flarevt {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

json header(const char* kind) { return json{{"version", kDocumentVersion}, {"kind", kind}}; }

json parse_document(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("version", 0) != kDocumentVersion) {
    throw ParseError("unsupported document version (expected " +
                     std::to_string(kDocumentVersion) + ")");
  }
  if (j.value("kind", std::string{}) != kind) {
    throw ParseError(std::string("expected a '") + kind + "' document");
  }
  return j;
}

json gpd_json(const GpdFit& f) {
  return json{
      {"params",
       {{"shape", f.params.shape}, {"scale", f.params.scale}, {"threshold", f.params.threshold}}},
      {"n_exceed", f.n_exceed},
      {"n_total", f.n_total},
      {"loglik", number(f.loglik)},
      {"se_shape", number(f.se_shape)},
      {"se_scale", number(f.se_scale)},
      {"cov", {{number(f.cov[0][0]), number(f.cov[0][1])}, {number(f.cov[1][0]), number(f.cov[1][1])}}},
      {"zeta_u", f.zeta_u},
      {"converged", f.converged},
      {"iterations", f.iterations},
  };
}

GpdFit gpd_from(const json& j) {
  GpdFit f;
  const auto& p = j.at("params");
  f.params.shape = p.at("shape").get<double>();
  f.params.scale = p.at("scale").get<double>();
  f.params.threshold = p.at("threshold").get<double>();
  f.n_exceed = j.at("n_exceed").get<std::size_t>();
  f.n_total = j.at("n_total").get<std::size_t>();
  f.loglik = read_number(j, "loglik");
  f.se_shape = read_number(j, "se_shape");
  f.se_scale = read_number(j, "se_scale");
  const auto& cov = j.at("cov");
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& v = cov.at(r).at(c);
      f.cov[r][c] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
  }
  f.zeta_u = j.at("zeta_u").get<double>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  return f;
}

json interval_json(const ProfileInterval& ci) {
  return json{{"parameter", ci.parameter}, {"mle", ci.mle},
              {"lower", ci.lower},         {"upper", ci.upper},
              {"confidence", ci.confidence}, {"lower_found", ci.lower_found},
              {"upper_found", ci.upper_found}};
}

ProfileInterval interval_from(const json& j) {
  ProfileInterval ci;
  ci.parameter = j.at("parameter").get<std::string>();
  ci.mle = j.at("mle").get<double>();
  ci.lower = j.at("lower").get<double>();
  ci.upper = j.at("upper").get<double>();
  ci.confidence = j.at("confidence").get<double>();
  ci.lower_found = j.at("lower_found").get<bool>();
  ci.upper_found = j.at("upper_found").get<bool>();
  return ci;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string to_json(const GpdFit& fit) {
  json j = header("gpd_fit");
  j["fit"] = gpd_json(fit);
  return j.dump(2);
}

GpdFit gpd_fit_from_json(const std::string& text) {
  return gpd_from(parse_document(text, "gpd_fit").at("fit"));
}

std::string to_json(const GevFit& f) {
  json cov = json::array();
  for (const auto& row : f.cov) cov.push_back({number(row[0]), number(row[1]), number(row[2])});
  json j = header("gev_fit");
  j["fit"] = {
      {"params",
       {{"location", f.params.location}, {"scale", f.params.scale}, {"shape", f.params.shape}}},
      {"n_maxima", f.n_maxima},
      {"loglik", number(f.loglik)},
      {"se_location", number(f.se_location)},
      {"se_scale", number(f.se_scale)},
      {"se_shape", number(f.se_shape)},
      {"cov", cov},
      {"converged", f.converged},
      {"iterations", f.iterations},
  };
  return j.dump(2);
}

GevFit gev_fit_from_json(const std::string& text) {
  const json j = parse_document(text, "gev_fit").at("fit");
  GevFit f;
  const auto& p = j.at("params");
  f.params.location = p.at("location").get<double>();
  f.params.scale = p.at("scale").get<double>();
  f.params.shape = p.at("shape").get<double>();
  f.n_maxima = j.at("n_maxima").get<std::size_t>();
  f.loglik = read_number(j, "loglik");
  f.se_location = read_number(j, "se_location");
  f.se_scale = read_number(j, "se_scale");
  f.se_shape = read_number(j, "se_shape");
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& v = j.at("cov").at(r).at(c);
      f.cov[r][c] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
  }
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  return f;
}

std::string to_json(const SeasonalModel& model) {
  json j = header("seasonal_model");
  j["origin"] = format_iso8601(model.origin);
  json comps = json::array();
  for (const auto& c : model.components) {
    comps.push_back({{"omega", c.omega}, {"A", c.sin_coef}, {"B", c.cos_coef}});
  }
  j["components"] = comps;
  j["offset"] = model.offset;
  return j.dump(2);
}

SeasonalModel seasonal_model_from_json(const std::string& text) {
  const json j = parse_document(text, "seasonal_model");
  SeasonalModel m;
  m.origin = parse_iso8601(j.at("origin").get<std::string>());
  for (const auto& c : j.at("components")) {
    m.components.push_back(
        {c.at("omega").get<double>(), c.at("A").get<double>(), c.at("B").get<double>()});
  }
  m.offset = j.at("offset").get<double>();
  return m;
}

std::string to_json(const FitDocument& doc) {
  json j = header("fit_document");
  j["fit"] = gpd_json(doc.fit);
  j["excesses"] = doc.excesses;
  j["catalog"] = {{"n_total", doc.n_total}, {"span_years", doc.span_years}, {"n_y", doc.n_y}};
  j["shape_ci"] = doc.shape_ci ? interval_json(*doc.shape_ci) : json(nullptr);
  if (doc.extremal_index) {
    const auto& r = *doc.extremal_index;
    j["extremal_index"] = {{"theta", r.theta},
                           {"n_exceed", r.n_exceed},
                           {"n_clusters", r.n_clusters},
                           {"run_length", r.run_length}};
  } else {
    j["extremal_index"] = nullptr;
  }
  return j.dump(2);
}

FitDocument fit_document_from_json(const std::string& text) {
  const json j = parse_document(text, "fit_document");
  FitDocument doc;
  try {
    doc.fit = gpd_from(j.at("fit"));
    doc.excesses = j.at("excesses").get<std::vector<double>>();
    const auto& c = j.at("catalog");
    doc.n_total = c.at("n_total").get<std::size_t>();
    doc.span_years = c.at("span_years").get<double>();
    doc.n_y = c.at("n_y").get<double>();
    if (!j.at("shape_ci").is_null()) doc.shape_ci = interval_from(j.at("shape_ci"));
    if (j.contains("extremal_index") && !j.at("extremal_index").is_null()) {
      const auto& r = j.at("extremal_index");
      doc.extremal_index = ExtremalIndexResult{
          r.at("theta").get<double>(), r.at("n_exceed").get<std::size_t>(),
          r.at("n_clusters").get<std::size_t>(), r.at("run_length").get<std::size_t>()};
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fit document: ") + e.what());
  }
  return doc;
}

}  // namespace flarevt
