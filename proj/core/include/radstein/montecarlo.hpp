#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "radstein/functional.hpp"
#include "radstein/space.hpp"

namespace radstein {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel sampling is order-independent.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

/// Uniform double in [0, 1) from 53 bits of counter_hash.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

}  // namespace rng

struct SampleSpec {
  std::int64_t count = 100000;
  std::uint64_t seed = 0;
  int batches = 100;  // batch means for standard errors
};

/// Draws configuration number `sample_index` of the stream identified by
/// `seed`: bit k is set iff uniform(seed, sample_index, k) < p_k.
Configuration sample_configuration(const RademacherSpace& space, std::int64_t sample_index,
                                   std::uint64_t seed);

struct MomentEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct FunctionalStats {
  MomentEstimate mean;
  MomentEstimate variance;
  /// Raw absolute moments E|F|^r keyed by the requested exponent.
  std::map<double, MomentEstimate> raw_moments;
  std::int64_t count = 0;
};

/// Batch-means estimates of mean, variance and requested raw absolute moments.
FunctionalStats estimate_functional_stats(const RademacherSpace& space, const Functional& f,
                                          const SampleSpec& spec,
                                          const std::vector<double>& moments = {}, int threads = 1);

}  // namespace radstein
