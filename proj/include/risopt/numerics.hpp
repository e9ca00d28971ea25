#pragma once

#include <functional>

#include "risopt/errors.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Spectral factorization A = Q diag(lambda) Q^H of a Hermitian matrix.
struct EigResult {
  RVec eigenvalues;   // real, ascending
  CMat eigenvectors;  // unitary; column j pairs with eigenvalues[j]
};

/// Eigendecomposition of a Hermitian matrix. The input must satisfy
/// max|A - A^H| <= tol * max(1, max|A|).
EigResult hermitian_eig(const CMat& a, double hermitian_tol = 1e-12);

/// Solve A x = b for Hermitian positive-definite A via Cholesky.
CVec solve_hpd(const CMat& a, const CVec& b);

/// Sign-changing interval for root finding; requires lo < hi.
struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  double tol = 1e-10;  // accept |f| <= tol or bracket width <= tol
  int max_iter = 200;
  std::function<double(double)> derivative;  // enables Newton refinement
};

/// Root of a continuous, strictly monotone function on a bracket with a sign
/// change. Bisection by default; Newton polish when a derivative is given.
/// Throws BracketError when f(lo) and f(hi) share a sign.
double find_root_monotone(const std::function<double(double)>& f,
                          Bracket bracket, const RootOptions& opts);

inline double find_root_monotone(const std::function<double(double)>& f,
                                 Bracket bracket, double tol = 1e-10) {
  RootOptions opts;
  opts.tol = tol;
  return find_root_monotone(f, bracket, opts);
}

}  // namespace risopt
