#include <doctest.h>

#include <cmath>
#include <random>

#include "risopt/numerics.hpp"

using namespace risopt;

namespace {

CMat random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint()).eval();
}

CVec random_cvec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("hermitian_eig identity") {
  const EigResult r = hermitian_eig(CMat::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(1.0));
  CHECK((r.eigenvectors.adjoint() * r.eigenvectors - CMat::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-9);
}

TEST_CASE("hermitian_eig diagonal sorts ascending") {
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -1.0;
  const EigResult r = hermitian_eig(a);
  CHECK(r.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(r.eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig reconstruction and unitarity up to dim 64") {
  std::mt19937_64 rng(7);
  for (int n : {2, 4, 9, 16, 33, 64}) {
    const CMat a = random_hermitian(n, rng);
    const EigResult r = hermitian_eig(a);
    for (int i = 0; i + 1 < n; ++i) CHECK(r.eigenvalues[i] <= r.eigenvalues[i + 1]);
    const CMat rebuilt =
        r.eigenvectors * r.eigenvalues.asDiagonal() * r.eigenvectors.adjoint();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() <= 1e-8 * a.cwiseAbs().maxCoeff());
    CHECK((r.eigenvectors.adjoint() * r.eigenvectors - CMat::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-9);
  }
}

TEST_CASE("hermitian_eig rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(CMat::Zero(2, 3)), DimensionError);
  CMat a = CMat::Zero(2, 2);
  a(0, 1) = Complex(1.0, 0.0);
  a(1, 0) = Complex(2.0, 0.0);
  CHECK_THROWS_AS(hermitian_eig(a), DomainError);
}

TEST_CASE("solve_hpd identity and scaling") {
  std::mt19937_64 rng(11);
  const CVec b = random_cvec(4, rng);
  CHECK((solve_hpd(CMat::Identity(4, 4), b) - b).norm() <= 1e-12 * b.norm());

  CMat two = 2.0 * CMat::Identity(2, 2);
  CVec rhs(2);
  rhs << Complex(4.0, 0.0), Complex(6.0, 0.0);
  const CVec x = solve_hpd(two, rhs);
  CHECK(std::abs(x[0] - Complex(2.0, 0.0)) <= 1e-12);
  CHECK(std::abs(x[1] - Complex(3.0, 0.0)) <= 1e-12);
}

TEST_CASE("solve_hpd residual on random SPD") {
  std::mt19937_64 rng(13);
  const CMat m = random_hermitian(5, rng);
  const CMat a = m * m.adjoint() + 0.1 * CMat::Identity(5, 5);
  const CVec b = random_cvec(5, rng);
  const CVec x = solve_hpd(a, b);
  CHECK((a * x - b).norm() <= 1e-9 * b.norm());
}

TEST_CASE("solve_hpd rejects indefinite matrix") {
  CMat a = CMat::Identity(2, 2);
  a(1, 1) = -1.0;
  CHECK_THROWS_AS(solve_hpd(a, CVec::Ones(2)), NumericalError);
}

TEST_CASE("find_root_monotone basics") {
  CHECK(find_root_monotone([](double x) { return x - 1.0; }, {0.0, 2.0}, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(find_root_monotone([](double x) { return x * x * x - 8.0; }, {0.0, 3.0},
                           1e-12) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("find_root_monotone needs a sign change") {
  CHECK_THROWS_AS(
      find_root_monotone([](double x) { return x + 10.0; }, {0.0, 1.0}, 1e-12),
      BracketError);
}

TEST_CASE("find_root_monotone newton refinement matches dense sweep") {
  auto f = [](double x) { return std::exp(x) - 3.0; };
  RootOptions opts;
  opts.tol = 1e-13;
  opts.derivative = [](double x) { return std::exp(x); };
  const double root = find_root_monotone(f, {0.0, 2.0}, opts);

  // Dense-sweep oracle: finest sign change location.
  double oracle = 0.0;
  double prev = f(0.0);
  for (int i = 1; i <= 200000; ++i) {
    const double x = 2.0 * i / 200000.0;
    const double fx = f(x);
    if ((prev <= 0.0) != (fx <= 0.0)) {
      oracle = x;
      break;
    }
    prev = fx;
  }
  CHECK(root == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(std::abs(root - oracle) <= 2.0 / 200000.0);
}
