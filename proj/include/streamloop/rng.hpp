// Copyright 2026 The streamloop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace streamloop {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Splittable counter-based generator: every draw is a pure function of
// (key, counter), so seeded runs are reproducible on any platform and
// independent draw streams never touch shared state.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  Rng split(std::uint64_t stream) const { return Rng(mix64(key_ ^ mix64(stream * kGolden + 1))); }

  std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGolden); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; keeps log() finite in normal().
  double uniform_pos(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes counters 2c and 2c+1.
  double normal(std::uint64_t counter) const {
    const double u1 = uniform_pos(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace streamloop
