#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specopt/apps/gen_sdp.hpp"
#include "specopt/apps/qcqp.hpp"

namespace specopt::tools {

/// Thrown for unusable configurations; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;  // gensdp | qcqp | selftest
  std::vector<int> sizes;  // n for gensdp, m for qcqp
  std::vector<std::uint64_t> seeds;
  std::vector<double> deltas{1e-6};
  std::optional<double> eps;
  std::optional<int> max_outer;
  int restarts = 3;
  int samples = 20;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv"};
  bool trace = false;
  /// Grid points per axis for region_*.csv (0 disables region output).
  int region_grid = 0;

  /// Throws ConfigError.
  void validate() const;
  SolverConfig solver_config() const;
};

/// "0..9", "1,4,7" or a mix such as "0..2,8".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Reads a JSON config whose keys mirror the command-line flags.
ExperimentConfig load_config_file(const std::string& path);

struct GenSdpRow {
  int n = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  apps::GenSdpRun run;
};

struct QcqpRow {
  int m = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  apps::QcqpOutcome outcome;
};

struct SelftestRow {
  std::string check;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  int exit_code = 0;
  std::vector<GenSdpRow> gensdp;
  std::vector<QcqpRow> qcqp;
  std::vector<SelftestRow> selftest;
  double wall_seconds = 0.0;
};

/// Runs every instance, writes results.csv, summary.csv, manifest.json
/// (plus trace.jsonl, region_*.csv, results.json when configured) into
/// out_dir, and returns the in-memory results. Instance-level errors are
/// recorded and give exit code 2; configuration errors throw ConfigError.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Median with the mean-of-middle-two convention for even counts.
double median(std::vector<double> values);

/// Scientific notation with 3 significant digits; |v| < 1e-20 prints "0".
std::string format_summary_value(double v);

/// Feasibility grid, level-set samples and method candidates for one
/// instance, as CSV text.
std::string region_csv(const apps::QcqpInstance& inst, const apps::QcqpOutcome& outcome,
                       int grid);

}  // namespace specopt::tools
