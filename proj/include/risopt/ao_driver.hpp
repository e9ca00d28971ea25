#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risopt/beamforming.hpp"
#include "risopt/channel.hpp"
#include "risopt/learning.hpp"
#include "risopt/phase_opt.hpp"
#include "risopt/types.hpp"

namespace risopt {

struct Scenario {
  SystemConfig cfg;
  Geometry geometry;
  std::vector<TaskProfile> tasks;
  std::uint64_t seed = 0;
};

struct TaskReport {
  double sinr = 0.0;
  double rate_bps_hz = 0.0;
  double samples = 0.0;
  double error = 0.0;
};

struct Solution {
  BeamformerSet beamformers;
  PhaseVector theta;
  std::vector<TaskReport> tasks;
  double objective = 0.0;  // max over per-task errors
  std::vector<double> trace;  // objective per AO iteration, first entry initial
  std::vector<std::vector<ElsStepRecord>> els_steps;  // per AO iteration
  std::vector<AdmmIterRecord> admm_trace;  // accepted solve of the last iteration
  double wall_time_s = 0.0;
};

/// Max over users of the predicted error at (theta, beamformers). A user with
/// zero SINR contributes the infinite-error sentinel.
double objective(const ChannelSet& ch, const PhaseVector& theta,
                 const BeamformerSet& bf, const std::vector<TaskProfile>& tasks,
                 const SystemConfig& cfg);

/// The channel realization a scenario denotes.
ChannelSet scenario_channels(const Scenario& scenario);

struct AoOptions {
  double ao_tol = 1e-4;  // relative objective change
  int max_iter = 20;
  ElsOptions els;
};

/// Alternating optimization: phase step (error level search) then closed-form
/// beamformer step, from theta = all-ones. The objective trace is
/// non-increasing.
Solution alternating_optimize(const Scenario& scenario, const AoOptions& opts = {});
Solution alternating_optimize(const Scenario& scenario, const ChannelSet& ch,
                              const AoOptions& opts = {});

enum class BaselineKind { no_ris, random_phase, sum_rate };

std::string to_string(BaselineKind kind);

/// Reference schemes evaluated on the same channel realization and reported
/// under the same max-learning-error objective.
Solution run_baseline(const Scenario& scenario, BaselineKind kind,
                      const AoOptions& opts = {});
Solution run_baseline(const Scenario& scenario, const ChannelSet& ch,
                      BaselineKind kind, const AoOptions& opts = {});

struct ScalingPoint {
  int m = 0;
  double mean_snr = 0.0;
};

/// Monte-Carlo mean of p |h_r^H g|^2 / sigma^2 for the single-user,
/// single-antenna RIS link with identity phases, per RIS size.
std::vector<ScalingPoint> scaling_law_experiment(const std::vector<int>& m_values,
                                                 int trials, double p,
                                                 double noise_watts, double var_h,
                                                 double var_g, std::uint64_t seed);

struct ScalingFit {
  double r_squared = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> mean_error;  // per m value
};

/// Regress the mean achieved error against (log2 M)^(-d) over the given RIS
/// sizes, using the task's error model on the single-user link rate.
ScalingFit scaling_error_fit(const std::vector<int>& m_values, int trials,
                             const TaskProfile& task, const SystemConfig& cfg,
                             double p, double noise_watts, double var_h,
                             double var_g, std::uint64_t seed);

}  // namespace risopt
