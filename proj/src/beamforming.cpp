#include "risopt/beamforming.hpp"

#include <cmath>
#include <string>

namespace risopt {

namespace {

void validate(const std::vector<CVec>& channels, const std::vector<double>& powers,
              double noise_watts) {
  if (channels.empty()) throw DimensionError("beamforming: no channels given");
  if (powers.size() != channels.size()) {
    throw DimensionError("beamforming: powers count does not match channels");
  }
  if (!(noise_watts > 0.0)) throw DomainError("beamforming: noise power must be > 0");
  const Eigen::Index n = channels.front().size();
  for (const auto& h : channels) {
    if (h.size() != n) throw DimensionError("beamforming: channel lengths differ");
  }
}

CMat whitening_matrix(const std::vector<CVec>& channels,
                      const std::vector<double>& powers, double noise_watts) {
  const Eigen::Index n = channels.front().size();
  CMat a = CMat::Identity(n, n);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    a.noalias() += (powers[i] / noise_watts) * channels[i] * channels[i].adjoint();
  }
  return a;
}

CVec normalized_with_fixed_phase(CVec w, int user) {
  const double norm = w.norm();
  if (!(norm > 0.0)) {
    throw DegenerateChannelError("mmse_beamformer: user " + std::to_string(user) +
                                 " has an all-zero channel");
  }
  w /= norm;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double mag = std::abs(w[j]);
    if (mag > 1e-12) {
      w *= std::conj(w[j]) / mag;
      break;
    }
  }
  return w;
}

}  // namespace

CVec mmse_beamformer(const std::vector<CVec>& channels,
                     const std::vector<double>& powers, double noise_watts,
                     int k) {
  validate(channels, powers, noise_watts);
  if (k < 0 || k >= static_cast<int>(channels.size())) {
    throw DimensionError("mmse_beamformer: user index out of range");
  }
  const CMat a = whitening_matrix(channels, powers, noise_watts);
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mmse_beamformer: factorization failed");
  }
  return normalized_with_fixed_phase(llt.solve(channels[static_cast<std::size_t>(k)]), k);
}

BeamformerSet all_beamformers(const std::vector<CVec>& channels,
                              const std::vector<double>& powers,
                              double noise_watts) {
  validate(channels, powers, noise_watts);
  const CMat a = whitening_matrix(channels, powers, noise_watts);
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("all_beamformers: factorization failed");
  }
  BeamformerSet set;
  set.w.reserve(channels.size());
  for (std::size_t k = 0; k < channels.size(); ++k) {
    set.w.push_back(
        normalized_with_fixed_phase(llt.solve(channels[k]), static_cast<int>(k)));
  }
  return set;
}

}  // namespace risopt
