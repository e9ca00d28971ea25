#include "risopt/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace risopt {

namespace {

constexpr double kEdgeMargin = 1e-10;   // stay inside the PSD interval
constexpr double kExpandLimit = 1e17;   // cap for one-sided bracket expansion

double max_abs_or_zero(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_or_zero(const CVec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

QuadConstraint make_constraint(CMat quad, CVec lin, double tau) {
  if (quad.rows() != quad.cols()) {
    throw DimensionError("make_constraint: matrix not square");
  }
  if (quad.rows() != lin.size()) {
    throw DimensionError("make_constraint: linear term has wrong length");
  }
  QuadConstraint c;
  c.quad = std::move(quad);
  c.lin = std::move(lin);
  c.tau = tau;
  c.scale = std::max({max_abs_or_zero(c.quad), max_abs_or_zero(c.lin),
                      std::abs(tau)});
  if (!(c.scale > 0.0)) c.scale = 1.0;
  EigResult eig = hermitian_eig(c.quad / c.scale, 1e-9);
  c.lambda = std::move(eig.eigenvalues);
  c.basis = std::move(eig.eigenvectors);
  c.lin_t = c.basis.adjoint() * (c.lin / c.scale);
  c.tau_n = c.tau / c.scale;
  return c;
}

double constraint_residual(const QuadConstraint& c, const CVec& q) {
  const Complex quad_term = q.dot(c.quad * q);
  return quad_term.real() - 2.0 * c.lin.dot(q).real() - c.tau;
}

std::vector<QcqpData> build_qcqp(const ChannelSet& ch, const BeamformerSet& bf,
                                 const std::vector<double>& powers,
                                 double noise_watts,
                                 const std::vector<double>& gamma) {
  const int n_users = ch.num_users();
  if (bf.num_users() != n_users || static_cast<int>(powers.size()) != n_users ||
      static_cast<int>(gamma.size()) != n_users) {
    throw DimensionError("build_qcqp: users/beamformers/powers/targets mismatch");
  }
  const int m = ch.num_elements();
  std::vector<QcqpData> out;
  out.reserve(static_cast<std::size_t>(n_users));
  for (int k = 0; k < n_users; ++k) {
    const double g = gamma[static_cast<std::size_t>(k)];
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw DomainError("build_qcqp: SINR targets must be finite and >= 0");
    }
    QcqpData data;
    data.user = k;
    data.gamma = g;
    data.powers = powers;
    data.noise = noise_watts;
    data.a.reserve(static_cast<std::size_t>(n_users));
    data.b.reserve(static_cast<std::size_t>(n_users));
    for (int i = 0; i < n_users; ++i) {
      ReflectedCoeffs rc = reflected_coefficients(ch, bf.w[static_cast<std::size_t>(k)], k, i);
      data.a.push_back(std::move(rc.a));
      data.b.push_back(rc.b);
    }
    const double p_k = powers[static_cast<std::size_t>(k)];
    const auto& a_kk = data.a[static_cast<std::size_t>(k)];
    const Complex b_kk = data.b[static_cast<std::size_t>(k)];
    CMat quad = -p_k * (a_kk * a_kk.adjoint());
    CVec lin = p_k * std::conj(b_kk) * a_kk;
    double tau = p_k * std::norm(b_kk) - g * noise_watts;
    for (int i = 0; i < n_users; ++i) {
      if (i == k) continue;
      const double p_i = powers[static_cast<std::size_t>(i)];
      const auto& a_ki = data.a[static_cast<std::size_t>(i)];
      const Complex b_ki = data.b[static_cast<std::size_t>(i)];
      quad.noalias() += (g * p_i) * (a_ki * a_ki.adjoint());
      lin -= (g * p_i) * std::conj(b_ki) * a_ki;
      tau -= g * p_i * std::norm(b_ki);
    }
    if (quad.rows() != m) throw DimensionError("build_qcqp: element count mismatch");
    data.constraint = make_constraint(std::move(quad), std::move(lin), tau);
    out.push_back(std::move(data));
  }
  return out;
}

double qcqp_sinr(const QcqpData& data, const CVec& q) {
  const int n_users = static_cast<int>(data.a.size());
  const int k = data.user;
  double interference = 0.0;
  for (int i = 0; i < n_users; ++i) {
    if (i == k) continue;
    interference += data.powers[static_cast<std::size_t>(i)] *
                    std::norm(q.dot(data.a[static_cast<std::size_t>(i)]) +
                              data.b[static_cast<std::size_t>(i)]);
  }
  const double signal = data.powers[static_cast<std::size_t>(k)] *
                        std::norm(q.dot(data.a[static_cast<std::size_t>(k)]) +
                                  data.b[static_cast<std::size_t>(k)]);
  return signal / (interference + data.noise);
}

double chi(double mu, const RVec& lambda, const CVec& zeta_t, const CVec& b_t,
           double tau) {
  const Eigen::Index m = lambda.size();
  if (zeta_t.size() != m || b_t.size() != m) {
    throw DimensionError("chi: operand lengths differ");
  }
  double quad = 0.0;
  Complex cross = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double denom = 1.0 + mu * lambda[j];
    if (denom == 0.0) throw NumericalError("chi: pole at 1 + mu*lambda = 0");
    const Complex qj = (zeta_t[j] + mu * b_t[j]) / denom;
    quad += lambda[j] * std::norm(qj);
    cross += std::conj(b_t[j]) * qj;
  }
  return quad - 2.0 * cross.real() - tau;
}

double chi_derivative(double mu, const RVec& lambda, const CVec& zeta_t,
                      const CVec& b_t) {
  const Eigen::Index m = lambda.size();
  if (zeta_t.size() != m || b_t.size() != m) {
    throw DimensionError("chi_derivative: operand lengths differ");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double denom = 1.0 + mu * lambda[j];
    if (denom == 0.0) throw NumericalError("chi_derivative: pole");
    sum += std::norm(b_t[j] - lambda[j] * zeta_t[j]) / (denom * denom * denom);
  }
  return -2.0 * sum;
}

CVec q_update(const CVec& zeta, const QuadConstraint& c, double tol) {
  if (zeta.size() != c.quad.rows()) {
    throw DimensionError("q_update: operand lengths differ");
  }
  const CVec zeta_t = c.basis.adjoint() * zeta;
  auto f = [&](double mu) { return chi(mu, c.lambda, zeta_t, c.lin_t, c.tau_n); };

  // Inequality pre-check: a feasible zeta is its own projection. Evaluated
  // through chi so the root search below sees the same sign.
  if (f(0.0) <= 0.0) return zeta;

  // chi is strictly decreasing where I + mu*Lambda >= 0, and chi(0) > 0 here,
  // so any root sits at mu > 0.
  const double lambda_min = c.lambda.minCoeff();
  const double lambda_scale = std::max(1.0, c.lambda.cwiseAbs().maxCoeff());
  double hi;
  if (lambda_min < -1e-14 * lambda_scale) {
    hi = (-1.0 / lambda_min) * (1.0 - kEdgeMargin);
    if (f(hi) > 0.0) {
      throw InfeasibleError("q_update: no multiplier in the PSD interval");
    }
  } else {
    hi = 1.0;
    while (f(hi) > 0.0) {
      hi *= 4.0;
      if (hi > kExpandLimit) {
        throw InfeasibleError("q_update: multiplier search exhausted");
      }
    }
  }

  RootOptions opts;
  opts.tol = tol;
  opts.derivative = [&](double mu) {
    return chi_derivative(mu, c.lambda, zeta_t, c.lin_t);
  };
  const double mu = find_root_monotone(f, {0.0, hi}, opts);

  CVec q_t(zeta_t.size());
  for (Eigen::Index j = 0; j < zeta_t.size(); ++j) {
    q_t[j] = (zeta_t[j] + mu * c.lin_t[j]) / (1.0 + mu * c.lambda[j]);
  }
  return c.basis * q_t;
}

PhaseVector theta_update(const std::vector<CVec>& q, const std::vector<CVec>& u) {
  if (q.empty() || q.size() != u.size()) {
    throw DimensionError("theta_update: q/u count mismatch");
  }
  CVec mean = CVec::Zero(q.front().size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k].size() != mean.size() || u[k].size() != mean.size()) {
      throw DimensionError("theta_update: vector lengths differ");
    }
    mean += q[k] + u[k];
  }
  mean /= static_cast<double>(q.size());
  CVec theta(mean.size());
  for (Eigen::Index m = 0; m < mean.size(); ++m) {
    const double mag = std::abs(mean[m]);
    theta[m] = mag == 0.0 ? Complex(1.0, 0.0) : mean[m] / mag;
  }
  return PhaseVector(std::move(theta));
}

CVec dual_update(const CVec& u, const CVec& q, const CVec& theta) {
  if (u.size() != q.size() || u.size() != theta.size()) {
    throw DimensionError("dual_update: vector lengths differ");
  }
  return u + q - theta;
}

AdmmResult admm_feasibility(const std::vector<QcqpData>& data,
                            const PhaseVector& theta_init,
                            const AdmmOptions& opts) {
  if (data.empty()) throw DimensionError("admm_feasibility: no constraints");
  const Eigen::Index m = theta_init.size();
  const std::size_t n_users = data.size();

  AdmmResult result;
  PhaseVector theta = theta_init;
  std::vector<CVec> q(n_users, theta_init.vec());
  std::vector<CVec> u(n_users, CVec::Zero(m));

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    for (std::size_t k = 0; k < n_users; ++k) {
      const CVec zeta = theta.vec() - u[k];
      try {
        q[k] = q_update(zeta, data[k].constraint, opts.q_tol);
      } catch (const InfeasibleError&) {
        result.feasible = false;
        result.theta = theta;
        result.iterations = iter;
        return result;
      }
    }
    theta = theta_update(q, u);
    double residual = 0.0;
    for (std::size_t k = 0; k < n_users; ++k) {
      u[k] += q[k] - theta.vec();
      residual = std::max(residual, (q[k] - theta.vec()).cwiseAbs().maxCoeff());
    }

    bool feasible_now = true;
    std::vector<double> sinrs(n_users);
    for (std::size_t k = 0; k < n_users; ++k) {
      sinrs[k] = qcqp_sinr(data[k], theta.vec());
      if (sinrs[k] < data[k].gamma * (1.0 - opts.sinr_slack)) feasible_now = false;
    }
    if (opts.record_trace) {
      result.trace.push_back({iter, residual, sinrs, feasible_now});
    }
    if (feasible_now && residual <= opts.tol) {
      result.feasible = true;
      result.theta = theta;
      result.iterations = iter;
      return result;
    }
  }
  result.feasible = false;
  result.theta = theta;
  result.iterations = opts.max_iter;
  return result;
}

namespace {

struct ProbeOutcome {
  AdmmResult admm;
  ElsStepRecord record;
};

ProbeOutcome probe_delta(double delta, const ChannelSet& ch,
                         const BeamformerSet& bf,
                         const std::vector<TaskProfile>& tasks,
                         const SystemConfig& cfg, const std::vector<double>& powers,
                         const PhaseVector& theta_init, const AdmmOptions& admm) {
  ProbeOutcome out;
  std::vector<double> gamma;
  gamma.reserve(tasks.size());
  for (const auto& task : tasks) {
    const double g = sinr_target(delta, task, cfg);
    if (!std::isfinite(g)) {
      // Target beyond double range; no phase vector can meet it.
      out.admm.feasible = false;
      out.admm.theta = theta_init;
      out.record = {delta, false, 0};
      return out;
    }
    gamma.push_back(g);
  }
  auto data = build_qcqp(ch, bf, powers, cfg.noise_watts, gamma);
  out.admm = admm_feasibility(data, theta_init, admm);
  out.record = {delta, out.admm.feasible, out.admm.iterations};
  return out;
}

}  // namespace

ElsResult els_search(const ChannelSet& ch, const BeamformerSet& bf,
                     const std::vector<TaskProfile>& tasks,
                     const SystemConfig& cfg, const PhaseVector& theta_warm,
                     const ElsOptions& opts) {
  if (static_cast<int>(tasks.size()) != ch.num_users()) {
    throw DimensionError("els_search: task count does not match users");
  }
  const std::vector<double> powers = task_powers(tasks);

  // Error level achieved by theta_warm; feasible upper end by construction.
  const auto h = all_effective_channels(ch, theta_warm);
  ElsResult result;
  double delta_hi = 0.0;
  result.sinr.resize(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const double s = sinr(h, bf.w[k], static_cast<int>(k), powers, cfg.noise_watts);
    result.sinr[k] = s;
    const double v = sample_count(rate(s), cfg, tasks[k].bits_per_sample);
    delta_hi = std::max(delta_hi, v > 0.0 ? error(v, tasks[k])
                                          : std::numeric_limits<double>::infinity());
  }
  result.theta_star = theta_warm;
  result.delta_star = delta_hi;
  result.trace.push_back({delta_hi, true, 0});
  if (!std::isfinite(delta_hi)) return result;  // dead channel; nothing to search

  auto theta_init_for = [&](const PhaseVector& best) -> const PhaseVector& {
    return opts.warm_start_previous ? best : theta_warm;
  };
  auto accept = [&](double delta, ProbeOutcome&& probe) {
    result.delta_star = delta;
    result.theta_star = probe.admm.theta;
    result.admm_trace = std::move(probe.admm.trace);
  };

  // Expand the lower end until a probe fails.
  double delta_lo = delta_hi * opts.lo_init_factor;
  while (delta_lo > 1e-300) {
    ProbeOutcome probe = probe_delta(delta_lo, ch, bf, tasks, cfg, powers,
                                     theta_init_for(result.theta_star), opts.admm);
    result.trace.push_back(probe.record);
    if (!probe.admm.feasible) break;
    accept(delta_lo, std::move(probe));
    delta_lo *= opts.lo_init_factor;
  }

  // Log-domain bisection between the infeasible lower and feasible upper end.
  const double log_width_target = -std::log1p(-opts.els_tol);
  double log_lo = std::log(delta_lo);
  double log_hi = std::log(result.delta_star);
  while (log_hi - log_lo > log_width_target) {
    const double delta_mid = std::exp(0.5 * (log_hi + log_lo));
    ProbeOutcome probe = probe_delta(delta_mid, ch, bf, tasks, cfg, powers,
                                     theta_init_for(result.theta_star), opts.admm);
    result.trace.push_back(probe.record);
    if (probe.admm.feasible) {
      accept(delta_mid, std::move(probe));
      log_hi = std::log(delta_mid);
    } else {
      log_lo = std::log(delta_mid);
    }
  }

  // Tighten until the boundary claim holds under a direct re-solve.
  for (int round = 0; round < 16; ++round) {
    const double delta_probe = result.delta_star * (1.0 - 2.0 * opts.els_tol);
    ProbeOutcome probe = probe_delta(delta_probe, ch, bf, tasks, cfg, powers,
                                     theta_init_for(result.theta_star), opts.admm);
    result.trace.push_back(probe.record);
    if (!probe.admm.feasible) break;
    accept(delta_probe, std::move(probe));
  }

  const auto h_star = all_effective_channels(ch, result.theta_star);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    result.sinr[k] =
        sinr(h_star, bf.w[k], static_cast<int>(k), powers, cfg.noise_watts);
  }
  return result;
}

}  // namespace risopt
