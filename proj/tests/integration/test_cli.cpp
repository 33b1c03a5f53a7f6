#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flarevt/distributions.hpp"
#include "flarevt/serialize.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = FLAREVT_TEST_DATA;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "flarevt_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" FLAREVT_CLI_PATH "\" " + args +
                          " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::vector<std::vector<double>> read_numeric_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("missing input file exits nonzero and names the path") {
  const auto dir = scratch("missing");
  const auto r = run("ingest --input /nonexistent/flares.csv --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("/nonexistent/flares.csv") != std::string::npos);
}

TEST_CASE("one bad row is skipped and counted") {
  const auto dir = scratch("bad_row");
  const auto r = run("ingest --input \"" + (kData / "one_bad_row.csv").string() +
                         "\" --out-dir \"" + dir.string() + "\"",
                     dir);
  CHECK(r.code == 0);
  const auto stats = read_json(dir / "stats.json");
  CHECK(stats["skipped"] == 1);
  CHECK(stats["n_total"] == 3);
  CHECK(r.err.find("one_bad_row.csv:4") != std::string::npos);
  CHECK(fs::exists(dir / "catalog.csv"));
}

TEST_CASE("NOAA input is scaled by default and the scaling can be disabled") {
  const auto dir = scratch("noaa");
  const std::string in = "--input \"" + (kData / "xrs_sample.txt").string() + "\" --format noaa-xrs";
  REQUIRE(run("ingest " + in + " --out-dir \"" + (dir / "a").string() + "\"", dir).code == 0);
  REQUIRE(run("ingest " + in + " --no-scale-goes --out-dir \"" + (dir / "b").string() + "\"", dir)
              .code == 0);
  const auto a = read_json(dir / "a" / "stats.json");
  const auto b = read_json(dir / "b" / "stats.json");
  CHECK(a["n_total"] == 5);
  CHECK(a["scaling_applied"] == true);
  CHECK(b["scaling_applied"] == false);
  CHECK(a["max_flux"].get<double>() == doctest::Approx(2.8e-3 / 0.7));
  CHECK(b["max_flux"].get<double>() == doctest::Approx(2.8e-3));
}

TEST_CASE("threshold above the data maximum fails with a zero-exceedance message") {
  const auto dir = scratch("high_u");
  const auto r = run("fit --input \"" + (kData / "valid.csv").string() +
                         "\" --threshold 1 --out-dir \"" + dir.string() + "\"",
                     dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("zero exceedances") != std::string::npos);
}

TEST_CASE("synthetic GPD catalog: fit converges with a straight QQ plot") {
  const auto dir = scratch("synthetic_fit");
  const std::string d = "--out-dir \"" + dir.string() + "\"";
  REQUIRE(run("simulate --kind gpd --n 3000 --shape 0.12 --scale 5e-4 --location 5e-4 --seed 3 " + d,
              dir).code == 0);
  const auto r = run("fit --input \"" + (dir / "simulated.csv").string() + "\" --threshold 5e-4 " + d, dir);
  CHECK(r.code == 0);
  const auto fit = read_json(dir / "fit.json");
  CHECK(fit["fit"]["converged"] == true);
  CHECK(std::abs(fit["fit"]["params"]["shape"].get<double>() - 0.12) <= 0.1);

  const auto qq = read_numeric_csv(dir / "diag_qq.csv");
  REQUIRE(qq.size() == 3000);
  double mx = 0, my = 0;
  for (const auto& row : qq) { mx += row[0]; my += row[1]; }
  mx /= qq.size();
  my /= qq.size();
  double sxy = 0, sxx = 0;
  for (const auto& row : qq) {
    sxy += (row[0] - mx) * (row[1] - my);
    sxx += (row[0] - mx) * (row[0] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(1.0).epsilon(0.1));
  for (const char* f : {"diag_pp.csv", "diag_density.csv", "diag_loglog.csv"}) {
    CHECK(fs::exists(dir / f));
  }
}

TEST_CASE("returns on a light-tailed fit match the log form") {
  const auto dir = scratch("returns_log");
  flarevt::FitDocument doc;
  doc.fit.params = {0.0, 2e-4, 5e-4};
  doc.fit.n_exceed = 4;
  doc.fit.n_total = 1000;
  doc.fit.zeta_u = 0.004;
  doc.fit.converged = true;
  doc.excesses = {1e-4, 2e-4, 3e-4, 5e-4};
  doc.fit.loglik = flarevt::gpd_loglik(doc.fit.params, doc.excesses);
  doc.n_total = 1000;
  doc.span_years = 1.0;
  doc.n_y = 1000.0;
  std::ofstream(dir / "fit.json") << flarevt::to_json(doc);
  const auto r = run("returns --input \"" + (dir / "fit.json").string() + "\" --years 2,11,110 --out-dir \"" +
                         dir.string() + "\"",
                     dir);
  REQUIRE(r.code == 0);
  const auto out = read_json(dir / "returns.json");
  REQUIRE(out["return_levels"].size() == 3);
  for (const auto& row : out["return_levels"]) {
    const double N = row["N_years"];
    const double expected = 5e-4 + 2e-4 * std::log(N * 1000.0 * 0.004);
    CHECK(std::abs(row["level_wm2"].get<double>() - expected) <= 1e-9 * expected);
  }
  CHECK(fs::exists(dir / "return_levels.csv"));
  CHECK(fs::exists(dir / "cycle_forecast.csv"));
  CHECK(fs::exists(dir / "decade_probabilities.csv"));
}

TEST_CASE("outputs are byte-identical across runs") {
  std::vector<std::string> names = {"simulated.csv", "fit.json",        "diag_qq.csv",
                                    "mrl.csv",       "stability.csv",   "return_levels.csv",
                                    "returns.json",  "cycle_forecast.csv"};
  std::vector<fs::path> dirs;
  for (const char* tag : {"det_a", "det_b"}) {
    const auto dir = scratch(tag);
    const std::string d = " --out-dir \"" + dir.string() + "\"";
    const std::string in = " --input \"" + (dir / "simulated.csv").string() + "\"";
    REQUIRE(run("simulate --kind gpd --n 4000 --seed 11" + d, dir).code == 0);
    REQUIRE(run("thresholds --grid 6e-4:2e-3:8" + in + d, dir).code == 0);
    REQUIRE(run("fit --threshold 8e-4" + in + d, dir).code == 0);
    REQUIRE(run("returns --input \"" + (dir / "fit.json").string() + "\"" + d, dir).code == 0);
    dirs.push_back(dir);
  }
  for (const auto& n : names) {
    INFO(n);
    CHECK(slurp(dirs[0] / n) == slurp(dirs[1] / n));
    CHECK_FALSE(slurp(dirs[0] / n).empty());
  }
}

TEST_CASE("config file and environment supply options") {
  const auto dir = scratch("config");
  const std::string d = " --out-dir \"" + dir.string() + "\"";
  REQUIRE(run("simulate --kind exponential --n 2000 --scale 1e-4 --location 1e-5 --seed 5" + d, dir)
              .code == 0);
  std::ofstream(dir / "run.conf") << "# flarevt settings\nthreshold=1e-4\nconfidence=0.9\n";
  const std::string in = " --input \"" + (dir / "simulated.csv").string() + "\"";
  auto r = run("fit --config \"" + (dir / "run.conf").string() + "\"" + in + d, dir);
  REQUIRE(r.code == 0);
  auto fit = read_json(dir / "fit.json");
  CHECK(fit["fit"]["params"]["threshold"].get<double>() == 1e-4);
  CHECK(fit["shape_ci"]["confidence"].get<double>() == 0.9);

  r = run("fit" + in + d, dir, "FLAREVT_THRESHOLD=2e-4");
  REQUIRE(r.code == 0);
  fit = read_json(dir / "fit.json");
  CHECK(fit["fit"]["params"]["threshold"].get<double>() == 2e-4);

  r = run("fit" + in + d, dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("--threshold") != std::string::npos);
}

TEST_CASE("thresholds and deseason run on synthetic catalogs") {
  const auto dir = scratch("pipeline");
  const std::string d = " --out-dir \"" + dir.string() + "\"";
  REQUIRE(run("simulate --kind two-tone --years 60 --per-year 300 --shape 0.1 --scale 1e-5 "
              "--location 1e-6 --seed 9" + d,
              dir).code == 0);
  const std::string in = " --input \"" + (dir / "simulated.csv").string() + "\"";
  auto r = run("thresholds" + in + d, dir);
  CHECK(r.code == 0);
  const auto summary = read_json(dir / "threshold_summary.json");
  CHECK(summary["grid_size"] == 40);
  CHECK(slurp(dir / "mrl.csv").rfind("u,mean_excess,ci_low,ci_high,n\n", 0) == 0);
  CHECK(slurp(dir / "stability.csv").rfind("u,shape,se_shape,mod_scale,se_mod_scale,n", 0) == 0);

  r = run("deseason --threshold 3e-5" + in + d, dir);
  CHECK(r.code == 0);
  const auto cmp = read_json(dir / "deseason_comparison.json");
  REQUIRE(cmp["periods_years"].size() == 2);
  std::vector<double> periods = {cmp["periods_years"][0], cmp["periods_years"][1]};
  std::sort(periods.begin(), periods.end());
  // Within one Fourier bin (1 / 60 per year) of the injected 11 and 14 years.
  CHECK(std::abs(1.0 / periods[0] - 1.0 / 11.0) <= 1.0 / 60.0);
  CHECK(std::abs(1.0 / periods[1] - 1.0 / 14.0) <= 1.0 / 60.0);
  CHECK(fs::exists(dir / "periodogram.csv"));
  CHECK(fs::exists(dir / "seasonal_model.json"));
  CHECK(fs::exists(dir / "catalog_deseasonalized.csv"));
  CHECK(slurp(dir / "periodogram.csv").rfind("freq_per_year,power", 0) == 0);
}

TEST_CASE("usage errors exit nonzero") {
  const auto dir = scratch("usage");
  CHECK(run("", dir).code != 0);
  CHECK(run("fit --confidence 0.3 --threshold 1e-4 --input \"" + (kData / "valid.csv").string() + "\"",
            dir).code != 0);
  CHECK(run("simulate --kind pareto", dir).code != 0);
}
