#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risopt/ao_driver.hpp"

namespace risopt {

enum class ExperimentKind { solve, benchmark, convergence, scaling, fit };

ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

/// Scaling-law experiment parameters (Monte-Carlo single-user RIS link).
struct ScalingParams {
  std::vector<int> m_values{16, 32, 64, 128, 256};
  double power_watts = 1.0;
  double noise_watts = 1.0;
  double var_h = 1.0;
  double var_g = 1.0;
  TaskProfile task;  // error model used for the (log2 M)^(-d) fit
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::solve;
  Scenario scenario;
  std::vector<int> antenna_counts;  // benchmark sweep; empty = scenario N only
  ScalingParams scaling;
  std::filesystem::path points_csv;  // fit experiment input
  std::uint64_t seed = 1;
  int trials = 1;
  int jobs = 1;
  std::filesystem::path out_dir = "out";
  AoOptions ao;
  std::optional<std::filesystem::path> channel_dump;
};

/// Command-line overrides applied on top of the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> rho;
  std::optional<double> ao_tol;
  std::optional<double> els_tol;
  std::optional<std::filesystem::path> points_csv;
  std::optional<std::filesystem::path> channel_dump;
};

/// Parse a JSON config file. Throws ConfigError with a line-numbered message
/// on syntax errors and a key path on semantic ones.
RunConfig load_config(const std::filesystem::path& path, ExperimentKind kind,
                      const CliOverrides& overrides);

/// Built-in defaults (the shipped four-task scenario) when no config file is given.
RunConfig default_config(ExperimentKind kind, const CliOverrides& overrides);

/// Execute an experiment: writes results.json, traces.csv and summary.csv to
/// config.out_dir. Outputs are a pure function of the config and overrides.
void run(const RunConfig& config);

/// Parse a (sample_size, test_error) CSV; a non-numeric first row is treated
/// as a header. Throws ConfigError naming the offending row.
std::vector<std::pair<double, double>> load_points_csv(
    const std::filesystem::path& path);

/// Format a double so it round-trips exactly via strtod.
std::string format_number(double value);

}  // namespace risopt
