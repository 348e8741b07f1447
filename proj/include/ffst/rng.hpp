#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace ffst {

// splitmix64 finalizer. Used for seed expansion and substream derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of a master seed. Stable across runs and
// independent of how many draws the parent has made, so parallel workers
// seeded this way reproduce the sequential result.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Seeded random source. The engine is xoshiro256++ with splitmix64 seed
// expansion, and every derived quantity (bounded integers, reals, normals)
// is mapped from raw engine words by the fixed rules below. Nothing is
// delegated to std:: distributions, whose output is implementation-defined;
// a seed therefore reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t st = seed;
    for (auto& w : s_) {
      st += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = st;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      w = z ^ (z >> 31);
    }
    s_[0] |= 1;  // xoshiro state must not be all zero
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // k uniform bits, 0 <= k <= 63. k == 0 returns 0 without consuming state.
  std::uint64_t bits(int k) {
    if (k == 0) return 0;
    return next_u64() >> (64 - k);
  }

  // Uniform integer in [0, m), m >= 1. Masked rejection, unbiased.
  std::uint64_t below(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("Rng::below: empty range");
    if (m == 1) return 0;
    int b = 64;
    std::uint64_t top = m - 1;
    while (b > 1 && !(top >> (b - 1))) --b;
    const std::uint64_t mask = (b == 64) ? ~0ULL : ((1ULL << b) - 1);
    for (;;) {
      const std::uint64_t v = next_u64() & mask;
      if (v < m) return v;
    }
  }

  // Uniform double in [0, 1), 53-bit resolution.
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal. Box-Muller on two fresh uniforms per variate (no pair
  // caching), so the draw count per call is fixed.
  double normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t substream(std::uint64_t index) const {
    return substream_seed(seed_, index);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace ffst
