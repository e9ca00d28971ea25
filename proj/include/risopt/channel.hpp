#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "risopt/errors.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Node layout and large-scale propagation parameters. Pathloss of a link of
/// length d is ref_loss * (d / ref_distance)^(-alpha) in linear power units.
struct Geometry {
  Eigen::Vector2d bs_pos{0.0, 0.0};
  Eigen::Vector2d ris_pos{50.0, 10.0};
  std::vector<Eigen::Vector2d> user_pos;
  double alpha_direct = 4.0;
  double alpha_bs_ris = 2.2;
  double alpha_ris_user = 2.2;
  double ref_distance_m = 1.0;
  double ref_loss_db = 30.0;  // loss at the reference distance
};

/// Default layout: users placed uniformly at random in a disc of radius 10 m
/// centered at (70, 0); BS and RIS at the struct defaults.
Geometry default_geometry(int num_users, std::uint64_t seed);

struct Dims {
  int n_antennas = 1;  // N
  int n_elements = 1;  // M
  int n_users = 1;     // K
};

/// Unit-modulus RIS coefficients theta with Theta = diag(theta).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(CVec coeffs);
  static PhaseVector ones(Eigen::Index m);
  static PhaseVector from_phases(const RVec& radians);
  static PhaseVector random(Eigen::Index m, std::uint64_t seed);

  const CVec& vec() const { return coeffs_; }
  Eigen::Index size() const { return coeffs_.size(); }

 private:
  CVec coeffs_;
};

/// One realization of all channels with pathloss applied.
struct ChannelSet {
  std::vector<CVec> direct;    // h_d,k in C^N, one per user
  std::vector<CVec> user_ris;  // h_r,k in C^M, one per user
  CMat ris_bs;                 // G in C^{M x N}
  double beta = 1.0;           // amplitude reflection coefficient in [0, 1]

  int num_antennas() const { return static_cast<int>(ris_bs.cols()); }
  int num_elements() const { return static_cast<int>(ris_bs.rows()); }
  int num_users() const { return static_cast<int>(direct.size()); }
};

/// Draw one Rayleigh-fading realization: i.i.d. CN(0,1) entries scaled by the
/// square root of the link pathloss. Deterministic in (geometry, dims, seed);
/// draw order is h_d,k by user, then h_r,k by user, then G row by row.
ChannelSet generate_channels(const Geometry& geometry, Dims dims,
                             std::uint64_t seed);

/// h_k = h_d,k + G^H Theta^H h_r,k with Theta = beta * diag(theta).
CVec effective_channel(const ChannelSet& ch, const PhaseVector& theta, int k);

std::vector<CVec> all_effective_channels(const ChannelSet& ch,
                                         const PhaseVector& theta);

/// Reflected-path decomposition for beamformer w_k against user i's channel:
/// theta^H a + b == w_k^H h_i for every theta, where h_i is the effective
/// channel at theta.
struct ReflectedCoeffs {
  CVec a;
  Complex b;
};

ReflectedCoeffs reflected_coefficients(const ChannelSet& ch, const CVec& w,
                                       int k, int i);

/// One JSON record per realization for cross-implementation comparison.
void dump_channels(std::ostream& out, const ChannelSet& ch,
                   const Geometry& geometry, Dims dims, std::uint64_t seed);

}  // namespace risopt
