#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace annosel {

// 64-bit avalanche mix (splitmix64 finalizer). Used to derive independent
// seeds for named sub-streams so draws stay reproducible no matter in which
// order components consume randomness.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t w : words) {
    h = mix64(h ^ mix64(w));
  }
  return h;
}

// Named sub-stream tags.
inline constexpr std::uint64_t kStreamInitPool = 1;
inline constexpr std::uint64_t kStreamClusterCenters = 2;
inline constexpr std::uint64_t kStreamFeatures = 3;
inline constexpr std::uint64_t kStreamDifficulty = 4;
inline constexpr std::uint64_t kStreamUncertaintyNoise = 5;
inline constexpr std::uint64_t kStreamRandomBaseline = 6;

// mt19937_64 engine with hand-rolled distributions. The engine's output
// sequence is pinned by the standard; std::*_distribution is not, so uniform
// and normal draws are implemented here to keep results identical across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform in [0, n), n >= 1; unbiased via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0} / n));
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal, Box-Muller. Draws two uniforms per call.
  double next_normal() {
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace annosel
