#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace vqs {

/// Deterministic counter-based random source built on the SplitMix64 mixer.
///
/// A stream is identified by a 64-bit base value derived from the seed and
/// any number of derivation keys. Outputs depend only on (base, draw index),
/// so two streams with the same identity produce identical sequences on any
/// platform and under any thread schedule. Derivation depends on the stream
/// identity alone, never on how many values the parent has already drawn.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Returns an independent child stream keyed by the given values.
  RandomSource derive(std::initializer_list<std::uint64_t> keys) const;

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint32_t next_below(std::uint32_t bound);

  /// Pair of independent standard normal deviates (Box-Muller).
  std::pair<double, double> next_gaussian_pair();

 private:
  struct FromBase {};
  RandomSource(FromBase, std::uint64_t base);

  std::uint64_t base_;
  std::uint64_t counter_;
};

}  // namespace vqs
