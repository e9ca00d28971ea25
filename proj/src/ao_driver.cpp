#include "risopt/ao_driver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

#include "risopt/rng.hpp"

namespace risopt {

namespace {

std::vector<TaskReport> task_reports(const ChannelSet& ch, const PhaseVector& theta,
                                     const BeamformerSet& bf,
                                     const std::vector<TaskProfile>& tasks,
                                     const SystemConfig& cfg) {
  const auto h = all_effective_channels(ch, theta);
  const auto powers = task_powers(tasks);
  std::vector<TaskReport> reports(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    TaskReport& r = reports[k];
    r.sinr = sinr(h, bf.w[k], static_cast<int>(k), powers, cfg.noise_watts);
    r.rate_bps_hz = rate(r.sinr);
    r.samples = sample_count(r.rate_bps_hz, cfg, tasks[k].bits_per_sample);
    r.error = r.samples > 0.0 ? error(r.samples, tasks[k])
                              : std::numeric_limits<double>::infinity();
  }
  return reports;
}

double max_error(const std::vector<TaskReport>& reports) {
  double worst = 0.0;
  for (const auto& r : reports) worst = std::max(worst, r.error);
  return worst;
}

Dims scenario_dims(const Scenario& s) {
  return {s.cfg.n_antennas, s.cfg.n_elements, s.cfg.n_users};
}

Solution finish_solution(const ChannelSet& ch, PhaseVector theta, BeamformerSet bf,
                         const std::vector<TaskProfile>& tasks,
                         const SystemConfig& cfg) {
  Solution sol;
  sol.tasks = task_reports(ch, theta, bf, tasks, cfg);
  sol.objective = max_error(sol.tasks);
  sol.theta = std::move(theta);
  sol.beamformers = std::move(bf);
  return sol;
}

}  // namespace

double objective(const ChannelSet& ch, const PhaseVector& theta,
                 const BeamformerSet& bf, const std::vector<TaskProfile>& tasks,
                 const SystemConfig& cfg) {
  return max_error(task_reports(ch, theta, bf, tasks, cfg));
}

ChannelSet scenario_channels(const Scenario& scenario) {
  return generate_channels(scenario.geometry, scenario_dims(scenario), scenario.seed);
}

Solution alternating_optimize(const Scenario& scenario, const AoOptions& opts) {
  return alternating_optimize(scenario, scenario_channels(scenario), opts);
}

Solution alternating_optimize(const Scenario& scenario, const ChannelSet& ch,
                              const AoOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& tasks = scenario.tasks;
  const auto& cfg = scenario.cfg;
  const auto powers = task_powers(tasks);

  PhaseVector theta = PhaseVector::ones(ch.num_elements());
  BeamformerSet bf =
      all_beamformers(all_effective_channels(ch, theta), powers, cfg.noise_watts);
  double obj = objective(ch, theta, bf, tasks, cfg);

  Solution sol;
  sol.trace.push_back(obj);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // Phase step: never worse than theta by construction; keep theta on ties.
    ElsResult els = els_search(ch, bf, tasks, cfg, theta, opts.els);
    const double obj_phase = objective(ch, els.theta_star, bf, tasks, cfg);
    if (obj_phase <= obj) theta = std::move(els.theta_star);
    if (!els.admm_trace.empty()) sol.admm_trace = std::move(els.admm_trace);
    sol.els_steps.push_back(std::move(els.trace));

    // Beamformer step: per-user SINR optimum for the new phases.
    bf = all_beamformers(all_effective_channels(ch, theta), powers, cfg.noise_watts);
    const double obj_next = objective(ch, theta, bf, tasks, cfg);
    sol.trace.push_back(obj_next);

    const double rel_change = std::abs(obj - obj_next) / std::max(obj, 1e-300);
    obj = obj_next;
    if (rel_change <= opts.ao_tol) break;
  }

  Solution finished = finish_solution(ch, std::move(theta), std::move(bf), tasks, cfg);
  finished.trace = std::move(sol.trace);
  finished.els_steps = std::move(sol.els_steps);
  finished.admm_trace = std::move(sol.admm_trace);
  finished.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finished;
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::no_ris:
      return "no_ris";
    case BaselineKind::random_phase:
      return "random_phase";
    case BaselineKind::sum_rate:
      return "sum_rate";
  }
  return "unknown";
}

namespace {

/// Cyclic per-element ascent on theta for the sum rate at fixed beamformers:
/// 64-point phase grid plus golden-section refinement per element.
PhaseVector sum_rate_phase_sweep(const ChannelSet& ch, const BeamformerSet& bf,
                                 const std::vector<double>& powers, double noise,
                                 const PhaseVector& theta0) {
  const int n_users = ch.num_users();
  const Eigen::Index m = theta0.size();
  std::vector<std::vector<CVec>> a(static_cast<std::size_t>(n_users));
  std::vector<std::vector<Complex>> b(static_cast<std::size_t>(n_users));
  for (int k = 0; k < n_users; ++k) {
    for (int i = 0; i < n_users; ++i) {
      ReflectedCoeffs rc = reflected_coefficients(ch, bf.w[static_cast<std::size_t>(k)], k, i);
      a[static_cast<std::size_t>(k)].push_back(std::move(rc.a));
      b[static_cast<std::size_t>(k)].push_back(rc.b);
    }
  }

  CVec theta = theta0.vec();
  // s[k][i] = theta^H a_{k,i}, updated incrementally per element change.
  std::vector<std::vector<Complex>> s(static_cast<std::size_t>(n_users),
                                      std::vector<Complex>(static_cast<std::size_t>(n_users)));
  for (int k = 0; k < n_users; ++k) {
    for (int i = 0; i < n_users; ++i) {
      s[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          theta.dot(a[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
    }
  }

  constexpr int kGridPoints = 64;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (Eigen::Index elem = 0; elem < m; ++elem) {
    const Complex old = theta[elem];
    auto rate_at = [&](double phi) {
      const Complex shift = std::conj(std::polar(1.0, phi)) - std::conj(old);
      double total = 0.0;
      for (std::size_t k = 0; k < static_cast<std::size_t>(n_users); ++k) {
        double signal = 0.0;
        double interference = 0.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n_users); ++i) {
          const Complex val = s[k][i] + shift * a[k][i][elem] + b[k][i];
          if (i == k) {
            signal = powers[i] * std::norm(val);
          } else {
            interference += powers[i] * std::norm(val);
          }
        }
        total += rate(signal / (interference + noise));
      }
      return total;
    };

    double best_phi = std::arg(old);
    double best_val = rate_at(best_phi);
    for (int g = 0; g < kGridPoints; ++g) {
      const double phi = kTwoPi * g / kGridPoints;
      const double val = rate_at(phi);
      if (val > best_val) {
        best_val = val;
        best_phi = phi;
      }
    }
    // Golden-section refinement around the best grid point.
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = best_phi - kTwoPi / kGridPoints;
    double hi = best_phi + kTwoPi / kGridPoints;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = rate_at(x1);
    double f2 = rate_at(x2);
    for (int it = 0; it < 30; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = rate_at(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = rate_at(x1);
      }
    }
    const double refined = 0.5 * (lo + hi);
    const double refined_val = rate_at(refined);
    if (refined_val > best_val) {
      best_val = refined_val;
      best_phi = refined;
    }

    const Complex next = std::polar(1.0, best_phi);
    const Complex shift = std::conj(next) - std::conj(old);
    for (int k = 0; k < n_users; ++k) {
      for (int i = 0; i < n_users; ++i) {
        s[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] +=
            shift * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][elem];
      }
    }
    theta[elem] = next;
  }
  return PhaseVector(std::move(theta));
}

Solution run_sum_rate_baseline(const Scenario& scenario, const ChannelSet& ch) {
  const auto& cfg = scenario.cfg;
  const auto powers = task_powers(scenario.tasks);
  constexpr int kMaxSweeps = 20;

  PhaseVector theta = PhaseVector::ones(ch.num_elements());
  BeamformerSet bf =
      all_beamformers(all_effective_channels(ch, theta), powers, cfg.noise_watts);
  double prev = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    theta = sum_rate_phase_sweep(ch, bf, powers, cfg.noise_watts, theta);
    const auto h = all_effective_channels(ch, theta);
    bf = all_beamformers(h, powers, cfg.noise_watts);
    double sr = 0.0;
    for (std::size_t k = 0; k < scenario.tasks.size(); ++k) {
      sr += rate(sinr(h, bf.w[k], static_cast<int>(k), powers, cfg.noise_watts));
    }
    if (sr - prev <= 1e-6 * std::max(1.0, std::abs(sr))) break;
    prev = sr;
  }
  Solution sol = finish_solution(ch, std::move(theta), std::move(bf),
                                 scenario.tasks, cfg);
  sol.trace = {sol.objective};
  return sol;
}

}  // namespace

Solution run_baseline(const Scenario& scenario, BaselineKind kind,
                      const AoOptions& opts) {
  return run_baseline(scenario, scenario_channels(scenario), kind, opts);
}

Solution run_baseline(const Scenario& scenario, const ChannelSet& ch,
                      BaselineKind kind, const AoOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& cfg = scenario.cfg;
  const auto powers = task_powers(scenario.tasks);
  Solution sol;
  switch (kind) {
    case BaselineKind::no_ris: {
      ChannelSet direct_only = ch;
      direct_only.ris_bs.setZero();
      PhaseVector theta = PhaseVector::ones(ch.num_elements());
      BeamformerSet bf = all_beamformers(all_effective_channels(direct_only, theta),
                                         powers, cfg.noise_watts);
      sol = finish_solution(direct_only, std::move(theta), std::move(bf),
                            scenario.tasks, cfg);
      sol.trace = {sol.objective};
      break;
    }
    case BaselineKind::random_phase: {
      PhaseVector theta = PhaseVector::random(
          ch.num_elements(), derive_seed(scenario.seed, kRandomPhaseSalt));
      BeamformerSet bf =
          all_beamformers(all_effective_channels(ch, theta), powers, cfg.noise_watts);
      sol = finish_solution(ch, std::move(theta), std::move(bf), scenario.tasks, cfg);
      sol.trace = {sol.objective};
      break;
    }
    case BaselineKind::sum_rate:
      sol = run_sum_rate_baseline(scenario, ch);
      break;
  }
  (void)opts;
  sol.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

std::vector<ScalingPoint> scaling_law_experiment(const std::vector<int>& m_values,
                                                 int trials, double p,
                                                 double noise_watts, double var_h,
                                                 double var_g, std::uint64_t seed) {
  if (trials < 1) throw DomainError("scaling_law_experiment: trials must be >= 1");
  if (!(noise_watts > 0.0)) throw DomainError("scaling_law_experiment: noise must be > 0");
  std::vector<ScalingPoint> points;
  points.reserve(m_values.size());
  const double amp_h = std::sqrt(var_h);
  const double amp_g = std::sqrt(var_g);
  for (std::size_t idx = 0; idx < m_values.size(); ++idx) {
    const int m = m_values[idx];
    if (m < 1) throw DomainError("scaling_law_experiment: RIS sizes must be >= 1");
    std::mt19937_64 rng(derive_seed(seed, idx));
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      Complex inner = 0.0;
      for (int j = 0; j < m; ++j) {
        const Complex h = amp_h * sample_cn01(rng);
        const Complex g = amp_g * sample_cn01(rng);
        inner += std::conj(h) * g;
      }
      acc += p * std::norm(inner) / noise_watts;
    }
    points.push_back({m, acc / trials});
  }
  return points;
}

ScalingFit scaling_error_fit(const std::vector<int>& m_values, int trials,
                             const TaskProfile& task, const SystemConfig& cfg,
                             double p, double noise_watts, double var_h,
                             double var_g, std::uint64_t seed) {
  if (m_values.size() < 2) throw DomainError("scaling_error_fit: need >= 2 RIS sizes");
  ScalingFit fit;
  fit.mean_error.reserve(m_values.size());
  const double amp_h = std::sqrt(var_h);
  const double amp_g = std::sqrt(var_g);
  std::vector<double> x;
  x.reserve(m_values.size());
  for (std::size_t idx = 0; idx < m_values.size(); ++idx) {
    const int m = m_values[idx];
    if (m < 2) throw DomainError("scaling_error_fit: RIS sizes must be >= 2");
    std::mt19937_64 rng(derive_seed(seed, idx));
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      Complex inner = 0.0;
      for (int j = 0; j < m; ++j) {
        const Complex h = amp_h * sample_cn01(rng);
        const Complex g = amp_g * sample_cn01(rng);
        inner += std::conj(h) * g;
      }
      const double snr = p * std::norm(inner) / noise_watts;
      const double v = sample_count(rate(snr), cfg, task.bits_per_sample);
      acc += v > 0.0 ? error(v, task) : std::numeric_limits<double>::infinity();
    }
    fit.mean_error.push_back(acc / trials);
    x.push_back(std::pow(std::log2(static_cast<double>(m)), -task.d));
  }

  const double n = static_cast<double>(m_values.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += fit.mean_error[i];
    sxx += x[i] * x[i];
    sxy += x[i] * fit.mean_error[i];
    syy += fit.mean_error[i] * fit.mean_error[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw DomainError("scaling_error_fit: degenerate sizes");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  const double mean_y = sy / n;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (fit.mean_error[i] - pred) * (fit.mean_error[i] - pred);
    ss_tot += (fit.mean_error[i] - mean_y) * (fit.mean_error[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace risopt
