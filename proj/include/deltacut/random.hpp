#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace deltacut {

/// SplitMix64 finaliser; used only to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream (generation, individual) under a master seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t generation,
                                    std::uint64_t individual) {
  return mix64(mix64(mix64(seed) ^ generation) ^ (individual + 0x632be59bd9b4e019ULL));
}

/// mt19937_64 with distribution transforms written out, since the standard
/// distributions are allowed to differ between library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal by Box-Muller (one draw per call, the pair is not cached).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace deltacut
