#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flarevt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 3;

struct RunConfig {
  std::filesystem::path input;
  std::string format = "csv";
  /// Unset means: on for noaa-xrs input, off for csv.
  std::optional<bool> scale_goes;
  std::optional<double> threshold;
  /// "lo:hi:n"; empty selects the default quantile grid.
  std::string grid;
  double confidence = 0.95;
  std::size_t run_length = 1;
  std::vector<double> years = {11, 20, 38, 50, 100, 110, 150};
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
};

struct ReturnsOptions {
  /// Class labels or numeric fluxes for the cycle forecast.
  std::vector<std::string> levels = {"M1", "M5", "X1", "X5", "X10", "X20", "X35", "X45"};
  double cycle_years = 11.0;
  /// Optional catalog for empirical probabilities below the threshold.
  std::filesystem::path catalog;
};

struct DeseasonOptions {
  std::string bin_stat = "count";
  double bin_months = 1.0;
  std::size_t components = 2;
  bool refine = false;
};

struct SimulateOptions {
  std::string kind = "gpd";
  std::size_t n = 5000;
  double shape = 0.12;
  double scale = 5e-4;
  double location = 5e-4;
  std::size_t window = 3;
  double per_year = 1799.0;
  double years = 42.0;
  std::string start = "1975-11-01T00:00:00Z";
};

int cmd_ingest(const RunConfig& cfg);
int cmd_thresholds(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);
int cmd_returns(const RunConfig& cfg, const ReturnsOptions& opt);
int cmd_deseason(const RunConfig& cfg, const DeseasonOptions& opt);
int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt);

}  // namespace flarevt::cli
