#pragma once

#include <cstdint>

namespace syslab {

/// Counter-based deterministic generator: output k of stream `seed` is
/// splitmix64(seed + k * GOLDEN), where GOLDEN is the 64-bit golden-ratio
/// increment.  Integer-only state, so streams reproduce bit-for-bit across
/// platforms, and any output can be addressed directly by its counter.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return at(seed_, counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller on two counter outputs.
  double next_normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace syslab
