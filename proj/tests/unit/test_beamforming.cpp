#include <doctest.h>

#include <cmath>
#include <random>

#include "risopt/beamforming.hpp"
#include "risopt/learning.hpp"

using namespace risopt;

namespace {

std::vector<CVec> random_channels(int n, int k, std::mt19937_64& rng,
                                  double spread = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<CVec> h;
  for (int u = 0; u < k; ++u) {
    CVec hu(n);
    for (int j = 0; j < n; ++j) hu[j] = spread * Complex(g(rng), g(rng));
    h.push_back(hu);
  }
  return h;
}

CVec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVec w(n);
  for (int j = 0; j < n; ++j) w[j] = Complex(g(rng), g(rng));
  return w / w.norm();
}

}  // namespace

TEST_CASE("single user reduces to the matched filter") {
  std::mt19937_64 rng(2);
  const auto h = random_channels(5, 1, rng);
  const CVec w = mmse_beamformer(h, {0.3}, 0.7, 0);
  // Sherman-Morrison: (I + c h h^H)^{-1} h is parallel to h.
  const double align = std::abs(w.dot(h[0])) / h[0].norm();
  CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("output is unit norm with a real-positive leading entry") {
  std::mt19937_64 rng(4);
  const auto h = random_channels(6, 3, rng);
  const BeamformerSet set = all_beamformers(h, {0.1, 0.2, 0.3}, 0.01);
  for (const auto& w : set.w) {
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w[0].real() >= 0.0);
  }
}

TEST_CASE("identical channels give identical beamformers") {
  std::mt19937_64 rng(6);
  auto h = random_channels(4, 1, rng);
  h.push_back(h[0]);
  const BeamformerSet set = all_beamformers(h, {0.2, 0.2}, 0.05);
  CHECK((set.w[0] - set.w[1]).norm() <= 1e-12);
}

TEST_CASE("per-user calls equal the batched call") {
  std::mt19937_64 rng(8);
  const auto h = random_channels(5, 4, rng);
  const std::vector<double> p{0.1, 0.4, 0.2, 0.05};
  const BeamformerSet set = all_beamformers(h, p, 0.02);
  for (int k = 0; k < 4; ++k) {
    CHECK((set.w[k] - mmse_beamformer(h, p, 0.02, k)).norm() <= 1e-12);
  }
}

TEST_CASE("no random beamformer beats the closed form") {
  std::mt19937_64 rng(10);
  for (int instance = 0; instance < 5; ++instance) {
    const int n = 4;
    const int k_users = 3;
    const auto h = random_channels(n, k_users, rng);
    const std::vector<double> p{0.3, 0.2, 0.1};
    const double noise = 0.05;
    const BeamformerSet set = all_beamformers(h, p, noise);
    for (int k = 0; k < k_users; ++k) {
      const double best = sinr(h, set.w[k], k, p, noise);
      for (int sample = 0; sample < 10000; ++sample) {
        const double s = sinr(h, random_unit(n, rng), k, p, noise);
        CHECK(s <= best * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("scale invariance of channels and noise amplitude") {
  std::mt19937_64 rng(12);
  const auto h = random_channels(4, 2, rng);
  const std::vector<double> p{0.2, 0.3};
  const double noise = 0.04;
  const double c = 7.3;
  std::vector<CVec> h_scaled;
  for (const auto& hk : h) h_scaled.push_back((std::sqrt(c) * hk).eval());
  const BeamformerSet a = all_beamformers(h, p, noise);
  const BeamformerSet b = all_beamformers(h_scaled, p, noise * c);
  for (int k = 0; k < 2; ++k) {
    CHECK((a.w[k] - b.w[k]).norm() <= 1e-9);
    CHECK(sinr(h, a.w[k], k, p, noise) ==
          doctest::Approx(sinr(h_scaled, b.w[k], k, p, noise * c)).epsilon(1e-9));
  }
}

TEST_CASE("degenerate channel is rejected") {
  std::vector<CVec> h{CVec::Zero(3)};
  CHECK_THROWS_AS(all_beamformers(h, {0.1}, 0.01), DegenerateChannelError);
}

TEST_CASE("input validation") {
  std::mt19937_64 rng(14);
  const auto h = random_channels(3, 2, rng);
  CHECK_THROWS_AS(all_beamformers(h, {0.1}, 0.01), DimensionError);
  CHECK_THROWS_AS(all_beamformers(h, {0.1, 0.2}, 0.0), DomainError);
  CHECK_THROWS_AS(mmse_beamformer(h, {0.1, 0.2}, 0.01, 5), DimensionError);
}
