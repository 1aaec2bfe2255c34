#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace awc {

/// SplitMix64 with an explicit stream index.
///
///   state_0  = seed XOR (stream * 0xD1B54A32D192ED03)
///   state   += 0x9E3779B97F4A7C15
///   z        = state
///   z        = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
///   z        = (z XOR (z >> 27)) * 0x94D049BB133111EB
///   output   = z XOR (z >> 31)
///
/// uniform() = (output >> 11) * 2^-53. normal() is Box-Muller on two
/// consecutive uniforms, cosine branch only. Everything is written out so the
/// sequences can be reproduced outside this library.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed ^ (stream * 0xD1B54A32D192ED03ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for repeat `repeat` of sweep cell `cell`, derived from a base seed.
constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t repeat) {
  std::uint64_t z = SplitMix64::mix(base + 0x9E3779B97F4A7C15ULL);
  z = SplitMix64::mix(z ^ (cell + 0x632BE59BD9B4E019ULL));
  return SplitMix64::mix(z ^ (repeat + 0x8CB92BA72F3D8DD7ULL));
}

}  // namespace awc
