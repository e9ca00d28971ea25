#pragma once

#include <vector>

#include "risopt/beamforming.hpp"
#include "risopt/channel.hpp"
#include "risopt/learning.hpp"
#include "risopt/numerics.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// One quadratic constraint q^H quad q - 2 Re{lin^H q} <= tau, carrying the
/// spectral data of quad (scaled to unit magnitude) used by the projection.
struct QuadConstraint {
  CMat quad;  // Hermitian
  CVec lin;
  double tau = 0.0;

  // Derived, filled by make_constraint: quad/scale = basis diag(lambda) basis^H.
  double scale = 1.0;
  RVec lambda;
  CMat basis;
  CVec lin_t;        // basis^H (lin / scale)
  double tau_n = 0.0;  // tau / scale
};

QuadConstraint make_constraint(CMat quad, CVec lin, double tau);

/// Constraint slack at q in raw units; feasible iff <= 0.
double constraint_residual(const QuadConstraint& c, const CVec& q);

/// Per-user SINR constraint of the phase feasibility problem in compact
/// quadratic form, plus the raw reflected-path coefficients it came from.
struct QcqpData {
  int user = 0;
  double gamma = 0.0;
  std::vector<CVec> a;     // a_{k,i} for i = 0..K-1
  std::vector<Complex> b;  // b_{k,i}
  std::vector<double> powers;
  double noise = 1.0;
  QuadConstraint constraint;
};

/// Build the K per-user constraints for fixed beamformers and SINR targets.
std::vector<QcqpData> build_qcqp(const ChannelSet& ch, const BeamformerSet& bf,
                                 const std::vector<double>& powers,
                                 double noise_watts,
                                 const std::vector<double>& gamma);

/// SINR of user k when its copy of the phase vector equals q.
double qcqp_sinr(const QcqpData& data, const CVec& q);

/// Multiplier equation for the projection onto one quadratic constraint,
/// evaluated in the eigenbasis of the constraint matrix.
double chi(double mu, const RVec& lambda, const CVec& zeta_t, const CVec& b_t,
           double tau);

/// Closed form chi'(mu) = -2 sum |b_m - lambda_m zeta_m|^2 / (1+mu lambda_m)^3.
double chi_derivative(double mu, const RVec& lambda, const CVec& zeta_t,
                      const CVec& b_t);

/// Projection of zeta onto {q : q^H A q - 2Re{b^H q} <= tau}: returns zeta
/// when already feasible, otherwise solves the equality-constrained problem
/// through the eigenbasis and a monotone root search for the multiplier on
/// the interval where I + mu*Lambda >= 0. Throws InfeasibleError when no
/// root exists there.
CVec q_update(const CVec& zeta, const QuadConstraint& c, double tol = 1e-9);

/// Projection of the consensus average onto the unit-modulus set; zero-mean
/// entries tie-break to 1.
PhaseVector theta_update(const std::vector<CVec>& q, const std::vector<CVec>& u);

/// Scaled dual ascent u + q - theta.
CVec dual_update(const CVec& u, const CVec& q, const CVec& theta);

struct AdmmOptions {
  double rho = 1.0;        // penalty; constant within a run
  double tol = 1e-4;       // primal residual max_k ||q_k - theta||_inf
  int max_iter = 500;
  double sinr_slack = 1e-6;  // accept SINR >= gamma * (1 - slack)
  double q_tol = 1e-9;       // multiplier equation tolerance (normalized)
  bool record_trace = true;
};

struct AdmmIterRecord {
  int iter = 0;
  double primal_residual = 0.0;
  std::vector<double> sinr;  // per user, at the current theta
  bool feasible = false;
};

struct AdmmResult {
  bool feasible = false;
  PhaseVector theta;
  int iterations = 0;
  std::vector<AdmmIterRecord> trace;
};

/// Consensus ADMM for the fixed-target feasibility problem: iterate per-user
/// projections q_k, the unit-modulus consensus theta, and duals u_k until
/// theta meets every SINR target, or max_iter is reached (infeasible).
AdmmResult admm_feasibility(const std::vector<QcqpData>& data,
                            const PhaseVector& theta_init,
                            const AdmmOptions& opts = {});

struct ElsOptions {
  double els_tol = 1e-3;        // relative width of the final delta bracket
  double lo_init_factor = 1e-4;  // first lower probe, relative to delta_hi
  bool warm_start_previous = true;  // seed ADMM from the last feasible theta
  AdmmOptions admm;
};

struct ElsStepRecord {
  double delta = 0.0;
  bool feasible = false;
  int admm_iters = 0;
};

struct ElsResult {
  double delta_star = 0.0;
  PhaseVector theta_star;
  std::vector<double> sinr;  // per user at theta_star
  std::vector<ElsStepRecord> trace;
  std::vector<AdmmIterRecord> admm_trace;  // from the accepted delta's solve
};

/// Error level searching: bisection on the max error level delta in log
/// domain. Each probe maps delta to per-user SINR targets and runs the ADMM
/// feasibility solver. The upper end starts at the error achieved by
/// theta_warm, which is feasible by construction; the returned delta_star is
/// feasible while delta_star * (1 - 2*els_tol) fails a direct re-solve.
ElsResult els_search(const ChannelSet& ch, const BeamformerSet& bf,
                     const std::vector<TaskProfile>& tasks,
                     const SystemConfig& cfg, const PhaseVector& theta_warm,
                     const ElsOptions& opts = {});

}  // namespace risopt
