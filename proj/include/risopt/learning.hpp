#pragma once

#include <string>
#include <utility>
#include <vector>

#include "risopt/errors.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Per-user learning task: error model e(v) = c * v^(-d), sample size D in
/// bits, and uplink transmit power.
struct TaskProfile {
  std::string name;
  double c = 1.0;
  double d = 0.5;
  double bits_per_sample = 1.0;  // D
  double power_watts = 0.1;      // p
};

struct SystemConfig {
  double bandwidth_hz = 5e6;  // B
  double time_s = 10.0;       // T
  double noise_watts = 1.0;   // sigma^2
  int n_antennas = 1;         // N
  int n_elements = 1;         // M
  int n_users = 1;            // K
};

/// p_k |w^H h_k|^2 / (sum_{i != k} p_i |w^H h_i|^2 + sigma^2).
double sinr(const std::vector<CVec>& channels, const CVec& w, int k,
            const std::vector<double>& powers, double noise_watts);

/// Spectral efficiency log2(1 + sinr) in bits/s/Hz.
double rate(double sinr_value);

/// Number of training samples v = B*T*R/D. The floor in the exact count is
/// dropped by default to keep the objective smooth; pass strict_floor for
/// integer reporting.
double sample_count(double rate_bps_hz, const SystemConfig& cfg,
                    double bits_per_sample, bool strict_floor = false);

/// Predicted classification error c * v^(-d); v must be > 0.
double error(double samples, const TaskProfile& task);

/// SINR target achieving error exactly delta:
/// gamma = 2^(D * (c/delta)^(1/d) / (B*T)) - 1.
double sinr_target(double delta, const TaskProfile& task,
                   const SystemConfig& cfg);

struct FitResult {
  double c = 0.0;
  double d = 0.0;
};

/// Least-squares fit of the error model on (samples, observed error) points:
/// ordinary least squares on log(error) = log c - d log v.
FitResult fit_error_model(const std::vector<std::pair<double, double>>& points);

/// The four shipped task profiles (SVM, MNIST, Fashion-MNIST, PointNet).
std::vector<TaskProfile> preset_task_profiles(double power_watts = 0.1);

std::vector<double> task_powers(const std::vector<TaskProfile>& tasks);

}  // namespace risopt
