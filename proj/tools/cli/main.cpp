#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "flarevt/error.hpp"

namespace {

using flarevt::cli::RunConfig;

// Options shared by every subcommand; each can also come from FLAREVT_<NAME>
// in the environment or from a key=value line in the --config file.
void add_common(CLI::App& app, RunConfig& cfg) {
  app.add_option("--input", cfg.input, "Input catalog (or fit.json for 'returns')")
      ->envname("FLAREVT_INPUT");
  app.add_option("--format", cfg.format, "Catalog format: csv or noaa-xrs")
      ->envname("FLAREVT_FORMAT")
      ->check(CLI::IsMember({"csv", "noaa-xrs"}));
  app.add_flag("--scale-goes,!--no-scale-goes", cfg.scale_goes,
               "Divide fluxes by 0.7 (default: on for noaa-xrs, off for csv)")
      ->envname("FLAREVT_SCALE_GOES");
  app.add_option("--threshold", cfg.threshold, "Threshold u in W m^-2")
      ->envname("FLAREVT_THRESHOLD");
  app.add_option("--grid", cfg.grid, "Threshold grid lo:hi:n")->envname("FLAREVT_GRID");
  app.add_option("--confidence", cfg.confidence, "Confidence level in (0.5, 1)")
      ->envname("FLAREVT_CONFIDENCE")
      ->capture_default_str();
  app.add_option("--run-length", cfg.run_length, "Runs declustering length r")
      ->envname("FLAREVT_RUN_LENGTH")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--years", cfg.years, "Return periods in years")
      ->envname("FLAREVT_YEARS")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->envname("FLAREVT_SEED")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "Output directory")
      ->envname("FLAREVT_OUT_DIR")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = flarevt::cli;
  CLI::App app{"Extreme value analysis of solar flare peak fluxes", "flarevt"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value file");

  RunConfig cfg;
  add_common(app, cfg);

  auto* ingest = app.add_subcommand("ingest", "Load a catalog, write canonical CSV and stats");
  auto* thresholds = app.add_subcommand("thresholds", "Mean residual life and stability over a grid");
  auto* fit = app.add_subcommand("fit", "Fit the GPD above --threshold");

  cli::ReturnsOptions ret;
  auto* returns = app.add_subcommand("returns", "Return levels and probabilities from fit.json");
  returns->add_option("--levels", ret.levels, "Cycle forecast levels (class labels or W m^-2)")
      ->delimiter(',')
      ->capture_default_str();
  returns->add_option("--cycle-years", ret.cycle_years, "Cycle length in years")
      ->capture_default_str();
  returns->add_option("--catalog", ret.catalog,
                      "Canonical CSV catalog for levels at or below the threshold");

  cli::DeseasonOptions des;
  auto* deseason = app.add_subcommand("deseason", "Remove periodic components and refit");
  deseason->add_option("--bin-stat", des.bin_stat, "Series for frequency detection")
      ->check(CLI::IsMember({"count", "mean_flux"}))
      ->capture_default_str();
  deseason->add_option("--bin-months", des.bin_months, "Bin width in months")
      ->capture_default_str();
  deseason->add_option("--components", des.components, "Number of periodic components")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  deseason->add_flag("--refine", des.refine, "Refine frequencies by nonlinear least squares");

  cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Write a seeded synthetic catalog");
  simulate->add_option("--kind", sim.kind, "gpd, exponential, moving-max or two-tone")
      ->check(CLI::IsMember({"gpd", "exponential", "moving-max", "two-tone"}))
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "Number of events")->capture_default_str();
  simulate->add_option("--shape", sim.shape, "GPD shape")->capture_default_str();
  simulate->add_option("--scale", sim.scale, "Scale in W m^-2")->capture_default_str();
  simulate->add_option("--location", sim.location, "Lower bound added to every flux")
      ->capture_default_str();
  simulate->add_option("--window", sim.window, "Moving-maximum window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--per-year", sim.per_year, "Events per year")->capture_default_str();
  simulate->add_option("--years", sim.years, "Catalog length for two-tone")->capture_default_str();
  simulate->add_option("--start", sim.start, "First event time")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cli::cmd_ingest(cfg);
    if (*thresholds) return cli::cmd_thresholds(cfg);
    if (*fit) return cli::cmd_fit(cfg);
    if (*returns) return cli::cmd_returns(cfg, ret);
    if (*deseason) return cli::cmd_deseason(cfg, des);
    if (*simulate) return cli::cmd_simulate(cfg, sim);
  } catch (const flarevt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitError;
}
