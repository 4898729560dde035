#pragma once

#include <cstdint>
#include <string_view>

namespace wsnsim {

/// xoshiro256** seeded through SplitMix64.
///
/// Each concern (placement, traffic, jitter) draws from its own stream
/// derived from the master seed and the stream name, so adding draws to one
/// concern never shifts another. Only integer operations and a fixed 53-bit
/// mantissa conversion are used; sequences are identical on every platform.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next();

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t s_[4];
};

}  // namespace wsnsim
