#include "risopt/numerics.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace risopt {

namespace {

double max_abs(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

}  // namespace

EigResult hermitian_eig(const CMat& a, double hermitian_tol) {
  if (a.rows() != a.cols()) {
    throw DimensionError("hermitian_eig: matrix is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ", expected square");
  }
  const double scale = std::max(1.0, max_abs(a));
  const double asym = max_abs(a - a.adjoint());
  if (asym > hermitian_tol * scale) {
    throw DomainError("hermitian_eig: input not Hermitian (max asymmetry " +
                      std::to_string(asym) + ")");
  }
  // Symmetrize so round-off in the input cannot leak into the result.
  const CMat sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CVec solve_hpd(const CMat& a, const CVec& b) {
  if (a.rows() != a.cols()) {
    throw DimensionError("solve_hpd: matrix not square");
  }
  if (a.rows() != b.size()) {
    throw DimensionError("solve_hpd: rhs length does not match matrix");
  }
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_hpd: matrix not positive definite");
  }
  return llt.solve(b);
}

double find_root_monotone(const std::function<double(double)>& f,
                          Bracket bracket, const RootOptions& opts) {
  if (!(bracket.lo < bracket.hi)) {
    throw DomainError("find_root_monotone: bracket requires lo < hi");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (std::abs(f_lo) <= opts.tol) return lo;
  if (std::abs(f_hi) <= opts.tol) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("find_root_monotone: no sign change across bracket");
  }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= opts.tol || (hi - lo) <= opts.tol) break;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }

  if (opts.derivative) {
    double x = mid;
    double fx = f(x);
    for (int iter = 0; iter < 10; ++iter) {
      const double dfx = opts.derivative(x);
      if (dfx == 0.0 || !std::isfinite(dfx)) break;
      const double next = x - fx / dfx;
      if (!(next > lo && next < hi)) break;
      const double f_next = f(next);
      if (!(std::abs(f_next) < std::abs(fx))) break;
      x = next;
      fx = f_next;
      if (std::abs(fx) <= opts.tol) break;
    }
    return x;
  }
  return mid;
}

}  // namespace risopt
