#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "risopt/channel.hpp"
#include "risopt/rng.hpp"

using namespace risopt;

namespace {

Geometry unit_geometry(int n_users) {
  // All nodes one reference distance apart, zero reference loss: every link
  // pathloss factor is exactly 1.
  Geometry g;
  g.bs_pos = {0.0, 0.0};
  g.ris_pos = {1.0, 0.0};
  g.user_pos.assign(static_cast<std::size_t>(n_users), {0.0, 1.0});
  g.ref_distance_m = 1.0;
  g.ref_loss_db = 0.0;
  return g;
}

}  // namespace

TEST_CASE("generate_channels is deterministic in the seed") {
  const Geometry g = default_geometry(3, 5);
  const Dims dims{4, 8, 3};
  const ChannelSet a = generate_channels(g, dims, 42);
  const ChannelSet b = generate_channels(g, dims, 42);
  const ChannelSet c = generate_channels(g, dims, 43);
  CHECK(a.ris_bs == b.ris_bs);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.direct[k] == b.direct[k]);
    CHECK(a.user_ris[k] == b.user_ris[k]);
  }
  CHECK(a.ris_bs != c.ris_bs);
}

TEST_CASE("unscaled coefficients have unit variance") {
  Geometry g = unit_geometry(1);  // direct link at the reference distance
  const int draws = 100000;
  // One unscaled coefficient per realization would be slow; a single long
  // vector has the same marginal law.
  const ChannelSet ch = generate_channels(g, {draws, 1, 1}, 9);
  double acc = 0.0;
  for (int j = 0; j < draws; ++j) acc += std::norm(ch.direct[0][j]);
  CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("reference distance gives unit pathloss scale") {
  Geometry g = unit_geometry(1);
  const ChannelSet ch = generate_channels(g, {2, 2, 1}, 3);
  // Compare against an explicit redraw with the same generator stream.
  std::mt19937_64 rng(derive_seed(3, kChannelSalt));
  for (int j = 0; j < 2; ++j) {
    const Complex expect = sample_cn01(rng);
    CHECK(std::abs(ch.direct[0][j] - expect) == 0.0);
  }
}

TEST_CASE("pathloss follows the distance power law") {
  Geometry g = unit_geometry(1);
  g.user_pos[0] = {0.0, 2.0};  // direct link distance doubled
  const int m_draws = 20000;
  const ChannelSet near = generate_channels(unit_geometry(1), {m_draws, 1, 1}, 17);
  const ChannelSet far = generate_channels(g, {m_draws, 1, 1}, 17);
  double p_near = 0.0, p_far = 0.0;
  for (int j = 0; j < m_draws; ++j) {
    p_near += std::norm(near.direct[0][j]);
    p_far += std::norm(far.direct[0][j]);
  }
  // alpha_direct = 4: doubling distance scales power by 2^-4.
  CHECK(p_far / p_near == doctest::Approx(std::pow(2.0, -4.0)).epsilon(0.05));
}

TEST_CASE("phase vector validates unit modulus") {
  CVec bad(2);
  bad << Complex(0.5, 0.0), Complex(1.0, 0.0);
  CHECK_THROWS_AS(PhaseVector{bad}, DomainError);
  const PhaseVector ok = PhaseVector::from_phases(RVec::LinSpaced(4, 0.0, 3.0));
  for (int m = 0; m < 4; ++m) {
    CHECK(std::abs(std::abs(ok.vec()[m]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("effective channel with no reflector is the direct channel") {
  Geometry g = unit_geometry(2);
  ChannelSet ch = generate_channels(g, {3, 5, 2}, 21);
  ch.ris_bs.setZero();
  const PhaseVector theta = PhaseVector::random(5, 99);
  for (int k = 0; k < 2; ++k) {
    CHECK((effective_channel(ch, theta, k) - ch.direct[k]).norm() == 0.0);
  }
}

TEST_CASE("effective channel scalar case pins the conjugation convention") {
  ChannelSet ch;
  ch.direct = {CVec::Ones(1)};
  ch.user_ris = {CVec::Ones(1)};
  ch.ris_bs = 2.0 * CMat::Ones(1, 1);
  ch.beta = 1.0;
  CVec theta_v(1);
  theta_v << Complex(0.0, 1.0);
  const CVec h = effective_channel(ch, PhaseVector{theta_v}, 0);
  // h = 1 + 2 * conj(j) * 1 = 1 - 2j
  CHECK(std::abs(h[0] - Complex(1.0, -2.0)) <= 1e-15);
}

TEST_CASE("effective channel is linear in theta when direct path is zero") {
  Geometry g = unit_geometry(1);
  ChannelSet ch = generate_channels(g, {3, 4, 1}, 33);
  ch.direct[0].setZero();
  const PhaseVector theta = PhaseVector::random(4, 1);
  const PhaseVector minus = PhaseVector{(-theta.vec()).eval()};
  CHECK((effective_channel(ch, theta, 0) + effective_channel(ch, minus, 0)).norm() <=
        1e-14);
}

TEST_CASE("reflected coefficients: degenerate cases") {
  Geometry g = unit_geometry(2);
  ChannelSet ch = generate_channels(g, {3, 4, 2}, 55);
  CVec w = CVec::Zero(3);
  w[0] = 1.0;

  ChannelSet no_ris_path = ch;
  no_ris_path.user_ris[1].setZero();
  const ReflectedCoeffs rc = reflected_coefficients(no_ris_path, w, 0, 1);
  CHECK(rc.a.norm() == 0.0);
  CHECK(std::abs(rc.b - w.dot(ch.direct[1])) <= 1e-15);

  ChannelSet dark = ch;
  dark.beta = 0.0;
  CHECK(reflected_coefficients(dark, w, 0, 1).a.norm() == 0.0);
}

TEST_CASE("reflected coefficients satisfy the consistency identity") {
  Geometry g = default_geometry(3, 2);
  const ChannelSet ch = generate_channels(g, {4, 6, 3}, 77);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec w(4);
  for (int j = 0; j < 4; ++j) w[j] = Complex(gauss(rng), gauss(rng));
  w /= w.norm();

  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      const ReflectedCoeffs rc = reflected_coefficients(ch, w, k, i);
      for (int trial = 0; trial < 100; ++trial) {
        const PhaseVector theta = PhaseVector::random(6, derive_seed(4, trial));
        const Complex via_coeffs = theta.vec().dot(rc.a) + rc.b;
        const Complex direct = w.dot(effective_channel(ch, theta, i));
        CHECK(std::abs(via_coeffs - direct) <= 1e-10);
      }
    }
  }
}

TEST_CASE("channel dump is valid JSON-ish text with the seed inside") {
  Geometry g = default_geometry(2, 4);
  const Dims dims{2, 3, 2};
  const ChannelSet ch = generate_channels(g, dims, 123);
  std::ostringstream out;
  dump_channels(out, ch, g, dims, 123);
  const std::string text = out.str();
  CHECK(text.find("\"seed\":123") != std::string::npos);
  CHECK(text.find("\"h_direct\"") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("index validation") {
  Geometry g = unit_geometry(1);
  const ChannelSet ch = generate_channels(g, {2, 2, 1}, 1);
  const PhaseVector theta = PhaseVector::ones(2);
  CHECK_THROWS_AS(effective_channel(ch, theta, 1), DimensionError);
  CHECK_THROWS_AS(effective_channel(ch, PhaseVector::ones(3), 0), DimensionError);
}
