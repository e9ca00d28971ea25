#include "risopt/learning.hpp"

#include <cmath>
#include <string>

namespace risopt {

double sinr(const std::vector<CVec>& channels, const CVec& w, int k,
            const std::vector<double>& powers, double noise_watts) {
  if (!(noise_watts > 0.0)) {
    throw DomainError("sinr: noise power must be > 0");
  }
  const int n_users = static_cast<int>(channels.size());
  if (k < 0 || k >= n_users) throw DimensionError("sinr: user index out of range");
  if (powers.size() != channels.size()) {
    throw DimensionError("sinr: powers count does not match channels");
  }
  double interference = 0.0;
  for (int i = 0; i < n_users; ++i) {
    if (i == k) continue;
    interference += powers[static_cast<std::size_t>(i)] *
                    std::norm(w.dot(channels[static_cast<std::size_t>(i)]));
  }
  const double signal = powers[static_cast<std::size_t>(k)] *
                        std::norm(w.dot(channels[static_cast<std::size_t>(k)]));
  return signal / (interference + noise_watts);
}

double rate(double sinr_value) { return std::log2(1.0 + sinr_value); }

double sample_count(double rate_bps_hz, const SystemConfig& cfg,
                    double bits_per_sample, bool strict_floor) {
  if (!(bits_per_sample > 0.0)) {
    throw DomainError("sample_count: bits_per_sample must be > 0");
  }
  const double v = cfg.bandwidth_hz * cfg.time_s * rate_bps_hz / bits_per_sample;
  return strict_floor ? std::floor(v) : v;
}

double error(double samples, const TaskProfile& task) {
  if (!(samples > 0.0)) {
    throw DomainError("error: sample count must be > 0");
  }
  return task.c * std::pow(samples, -task.d);
}

double sinr_target(double delta, const TaskProfile& task,
                   const SystemConfig& cfg) {
  if (!(delta > 0.0)) {
    throw DomainError("sinr_target: error level must be > 0");
  }
  const double v_needed = std::pow(task.c / delta, 1.0 / task.d);
  const double rate_needed =
      task.bits_per_sample * v_needed / (cfg.bandwidth_hz * cfg.time_s);
  return std::exp2(rate_needed) - 1.0;
}

FitResult fit_error_model(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw DomainError("fit_error_model: need at least 2 points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [v, e] = points[i];
    if (!(v > 0.0)) {
      throw DomainError("fit_error_model: point " + std::to_string(i) +
                        " has non-positive sample count");
    }
    if (!(e > 0.0 && e <= 1.0)) {
      throw DomainError("fit_error_model: point " + std::to_string(i) +
                        " has error outside (0, 1]");
    }
    const double x = std::log(v);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * std::max(1.0, n * sxx)) {
    throw DomainError("fit_error_model: degenerate points (all sample counts equal)");
  }
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), -slope};
}

std::vector<TaskProfile> preset_task_profiles(double power_watts) {
  return {
      {"svm", 7.07, 0.81, 324.0, power_watts},
      {"mnist", 10.79, 0.73, 6276.0, power_watts},
      {"fashion_mnist", 0.82, 0.23, 6276.0, power_watts},
      {"pointnet", 0.96, 0.24, 192008.0, power_watts},
  };
}

std::vector<double> task_powers(const std::vector<TaskProfile>& tasks) {
  std::vector<double> p;
  p.reserve(tasks.size());
  for (const auto& t : tasks) p.push_back(t.power_watts);
  return p;
}

}  // namespace risopt
