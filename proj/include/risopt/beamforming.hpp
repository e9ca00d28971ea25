#pragma once

#include <vector>

#include "risopt/errors.hpp"
#include "risopt/types.hpp"

namespace risopt {

/// Unit-norm receive beamformers, one per user.
struct BeamformerSet {
  std::vector<CVec> w;

  int num_users() const { return static_cast<int>(w.size()); }
};

/// SINR-optimal unit-norm combiner for user k at fixed phases:
/// w = (I + sum_i p_i/sigma^2 h_i h_i^H)^{-1} h_k, normalized. The global
/// phase is fixed by making the first nonzero entry real-positive.
CVec mmse_beamformer(const std::vector<CVec>& channels,
                     const std::vector<double>& powers, double noise_watts,
                     int k);

/// All K combiners off one Cholesky factorization of the shared matrix.
BeamformerSet all_beamformers(const std::vector<CVec>& channels,
                              const std::vector<double>& powers,
                              double noise_watts);

}  // namespace risopt
