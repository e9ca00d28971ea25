#pragma once

#include <cstdint>
#include <random>

#include "risopt/types.hpp"

namespace risopt {

/// Fixed seed-splitting rule: trials, substreams and salts are mixed into a
/// root seed with splitmix64 so parallel runs are schedule-independent.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(splitmix64(root) ^ splitmix64(index + 1));
}

// Substream salts.
inline constexpr std::uint64_t kUserLayoutSalt = 0x757365726c61ULL;
inline constexpr std::uint64_t kChannelSalt = 0x6368616e6cULL;
inline constexpr std::uint64_t kRandomPhaseSalt = 0x706861736573ULL;

/// Circularly-symmetric complex Gaussian, zero mean, unit variance:
/// independent real/imaginary parts with variance 1/2 each.
inline Complex sample_cn01(std::mt19937_64& rng) {
  static constexpr double kHalfVar = 0.7071067811865476;  // 1/sqrt(2)
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {kHalfVar * re, kHalfVar * im};
}

}  // namespace risopt
