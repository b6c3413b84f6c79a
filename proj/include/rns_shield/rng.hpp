#pragma once

#include <cstdint>
#include <random>

namespace rns_shield {

/// Seed-stable pseudo-random source. mt19937_64 output is pinned by the
/// C++ standard, and bounded draws below avoid the library-dependent
/// std distributions, so identical seeds give identical streams on every
/// platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, bound), bound >= 1. Rejection sampling keeps the
  /// draw unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % bound;
  }

  /// Derive a decorrelated child seed (splitmix64 finalizer).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace rns_shield
