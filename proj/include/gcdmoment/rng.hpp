#pragma once

#include <cstdint>

namespace gcdmoment {

/// SplitMix64. This exact state update is part of the reproducibility
/// contract: Monte Carlo results for a given seed are identical across
/// platforms and releases.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw from {1..n} via modulo reduction. The modulo bias is
  /// below n / 2^64 and is accepted in exchange for a trivially pinnable
  /// sampling rule.
  std::uint64_t next_in(std::uint64_t n) { return 1 + next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace gcdmoment
