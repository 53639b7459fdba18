// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace shapekit {

/// SplitMix64 stream. Every stochastic operation in the library draws from
/// this generator so results can be reproduced bit-for-bit elsewhere:
///
///   next():    state += 0x9E3779B97F4A7C15, then the standard mix.
///   uniform(): (next() >> 11) * 2^-53, in [0, 1).
///   normal():  Box-Muller on two fresh uniforms u1, u2 (in that order),
///              sqrt(-2 ln(1 - u1)) * cos(2 pi u2). The sine branch is
///              discarded, so each normal consumes exactly two draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  /// Uniform integer in [0, n). Uses the multiply-high reduction; n > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace shapekit
