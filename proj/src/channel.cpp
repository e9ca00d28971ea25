#include "risopt/channel.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <json.hpp>

#include "risopt/rng.hpp"

namespace risopt {

namespace {

void validate_dims(const Dims& dims) {
  if (dims.n_antennas < 1 || dims.n_elements < 1 || dims.n_users < 1) {
    throw DimensionError("generate_channels: dims must be positive");
  }
}

void validate_geometry(const Geometry& g, int n_users) {
  if (static_cast<int>(g.user_pos.size()) != n_users) {
    throw DimensionError("generate_channels: geometry has " +
                         std::to_string(g.user_pos.size()) + " users, dims say " +
                         std::to_string(n_users));
  }
  if (!(g.ref_distance_m > 0.0)) {
    throw DomainError("geometry: reference distance must be > 0");
  }
  if (!(g.alpha_direct > 0.0 && g.alpha_bs_ris > 0.0 && g.alpha_ris_user > 0.0)) {
    throw DomainError("geometry: pathloss exponents must be > 0");
  }
}

double link_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const double d = (a - b).norm();
  if (!(d > 0.0)) throw DomainError("geometry: coincident nodes give zero-length link");
  return d;
}

/// Linear power gain of a link: ref_loss * (d/d0)^(-alpha).
double pathloss_gain(const Geometry& g, double distance, double alpha) {
  const double ref_gain = std::pow(10.0, -g.ref_loss_db / 10.0);
  return ref_gain * std::pow(distance / g.ref_distance_m, -alpha);
}

CVec draw_scaled(std::mt19937_64& rng, Eigen::Index n, double gain) {
  const double amp = std::sqrt(gain);
  CVec v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = amp * sample_cn01(rng);
  return v;
}

}  // namespace

Geometry default_geometry(int num_users, std::uint64_t seed) {
  if (num_users < 1) throw DimensionError("default_geometry: num_users must be >= 1");
  Geometry g;
  std::mt19937_64 rng(derive_seed(seed, kUserLayoutSalt));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Vector2d center(70.0, 0.0);
  constexpr double kDiscRadius = 10.0;
  g.user_pos.reserve(static_cast<std::size_t>(num_users));
  for (int k = 0; k < num_users; ++k) {
    const double r = kDiscRadius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    g.user_pos.push_back(center + r * Eigen::Vector2d(std::cos(phi), std::sin(phi)));
  }
  return g;
}

PhaseVector::PhaseVector(CVec coeffs) : coeffs_(std::move(coeffs)) {
  for (Eigen::Index m = 0; m < coeffs_.size(); ++m) {
    if (std::abs(std::abs(coeffs_[m]) - 1.0) > 1e-12) {
      throw DomainError("PhaseVector: entry " + std::to_string(m) +
                        " is not unit-modulus");
    }
  }
}

PhaseVector PhaseVector::ones(Eigen::Index m) {
  return PhaseVector(CVec::Ones(m));
}

PhaseVector PhaseVector::from_phases(const RVec& radians) {
  CVec v(radians.size());
  for (Eigen::Index m = 0; m < radians.size(); ++m) {
    v[m] = std::polar(1.0, radians[m]);
  }
  return PhaseVector(std::move(v));
}

PhaseVector PhaseVector::random(Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  RVec phi(m);
  for (Eigen::Index j = 0; j < m; ++j) phi[j] = phase(rng);
  return from_phases(phi);
}

ChannelSet generate_channels(const Geometry& geometry, Dims dims,
                             std::uint64_t seed) {
  validate_dims(dims);
  validate_geometry(geometry, dims.n_users);

  std::mt19937_64 rng(derive_seed(seed, kChannelSalt));
  ChannelSet ch;
  ch.beta = 1.0;
  ch.direct.reserve(static_cast<std::size_t>(dims.n_users));
  ch.user_ris.reserve(static_cast<std::size_t>(dims.n_users));

  for (int k = 0; k < dims.n_users; ++k) {
    const double d = link_distance(geometry.bs_pos, geometry.user_pos[k]);
    ch.direct.push_back(
        draw_scaled(rng, dims.n_antennas, pathloss_gain(geometry, d, geometry.alpha_direct)));
  }
  for (int k = 0; k < dims.n_users; ++k) {
    const double d = link_distance(geometry.ris_pos, geometry.user_pos[k]);
    ch.user_ris.push_back(
        draw_scaled(rng, dims.n_elements, pathloss_gain(geometry, d, geometry.alpha_ris_user)));
  }
  const double d_g = link_distance(geometry.bs_pos, geometry.ris_pos);
  const double amp_g = std::sqrt(pathloss_gain(geometry, d_g, geometry.alpha_bs_ris));
  ch.ris_bs.resize(dims.n_elements, dims.n_antennas);
  for (int m = 0; m < dims.n_elements; ++m) {
    for (int n = 0; n < dims.n_antennas; ++n) {
      ch.ris_bs(m, n) = amp_g * sample_cn01(rng);
    }
  }
  return ch;
}

CVec effective_channel(const ChannelSet& ch, const PhaseVector& theta, int k) {
  if (k < 0 || k >= ch.num_users()) {
    throw DimensionError("effective_channel: user index out of range");
  }
  if (theta.size() != ch.num_elements()) {
    throw DimensionError("effective_channel: phase vector has wrong length");
  }
  const CVec reflected =
      theta.vec().conjugate().cwiseProduct(ch.user_ris[static_cast<std::size_t>(k)]);
  return ch.direct[static_cast<std::size_t>(k)] +
         ch.beta * (ch.ris_bs.adjoint() * reflected);
}

std::vector<CVec> all_effective_channels(const ChannelSet& ch,
                                         const PhaseVector& theta) {
  std::vector<CVec> h;
  h.reserve(static_cast<std::size_t>(ch.num_users()));
  for (int k = 0; k < ch.num_users(); ++k) h.push_back(effective_channel(ch, theta, k));
  return h;
}

ReflectedCoeffs reflected_coefficients(const ChannelSet& ch, const CVec& w,
                                       int k, int i) {
  if (k < 0 || k >= ch.num_users() || i < 0 || i >= ch.num_users()) {
    throw DimensionError("reflected_coefficients: user index out of range");
  }
  if (w.size() != ch.num_antennas()) {
    throw DimensionError("reflected_coefficients: beamformer has wrong length");
  }
  ReflectedCoeffs rc;
  rc.a = ch.beta * ch.user_ris[static_cast<std::size_t>(i)].cwiseProduct(
                       (ch.ris_bs * w).conjugate());
  rc.b = w.dot(ch.direct[static_cast<std::size_t>(i)]);  // w^H h_d,i
  return rc;
}

void dump_channels(std::ostream& out, const ChannelSet& ch,
                   const Geometry& geometry, Dims dims, std::uint64_t seed) {
  using nlohmann::json;
  auto vec_to_json = [](const CVec& v) {
    json arr = json::array();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      arr.push_back({v[j].real(), v[j].imag()});
    }
    return arr;
  };
  json rec;
  rec["seed"] = seed;
  rec["dims"] = {{"n_antennas", dims.n_antennas},
                 {"n_elements", dims.n_elements},
                 {"n_users", dims.n_users}};
  json users = json::array();
  for (const auto& p : geometry.user_pos) users.push_back({p.x(), p.y()});
  rec["geometry"] = {{"bs_pos", {geometry.bs_pos.x(), geometry.bs_pos.y()}},
                     {"ris_pos", {geometry.ris_pos.x(), geometry.ris_pos.y()}},
                     {"user_pos", users},
                     {"alpha_direct", geometry.alpha_direct},
                     {"alpha_bs_ris", geometry.alpha_bs_ris},
                     {"alpha_ris_user", geometry.alpha_ris_user},
                     {"ref_distance_m", geometry.ref_distance_m},
                     {"ref_loss_db", geometry.ref_loss_db}};
  rec["beta"] = ch.beta;
  json direct = json::array();
  for (const auto& h : ch.direct) direct.push_back(vec_to_json(h));
  rec["h_direct"] = direct;
  json user_ris = json::array();
  for (const auto& h : ch.user_ris) user_ris.push_back(vec_to_json(h));
  rec["h_ris"] = user_ris;
  json g_rows = json::array();
  for (int m = 0; m < ch.num_elements(); ++m) {
    g_rows.push_back(vec_to_json(ch.ris_bs.row(m).transpose()));
  }
  rec["g"] = g_rows;
  out << rec.dump() << '\n';
}

}  // namespace risopt
