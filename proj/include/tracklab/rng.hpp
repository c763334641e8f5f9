// SPDX-License-Identifier: MIT
// Copyright (c) 2026 tracklab contributors
//
// Deterministic random number generation. Every stochastic routine in the
// library draws from an explicitly passed Rng so that a run is reproducible
// from its seed alone.

#pragma once

#include <cstdint>
#include <random>

namespace tracklab {

/// Expands a 64-bit seed into a well-mixed stream of 64-bit words. Used to
/// derive high-entropy seed material for the main engine even when callers
/// pass small consecutive seeds (0, 1, 2, ...).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seeded pseudo-random source wrapping std::mt19937_64. The seed is expanded
/// through SplitMix64 so that adjacent seeds produce unrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(expanded(seed)) {}

  /// Uniform draw in [0, 1).
  double uniform() { return uniform_(engine_); }

  /// Standard normal draw.
  double normal() { return normal_(engine_); }

  /// Poisson draw with the given mean (mean >= 0; mean == 0 returns 0).
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(engine_);
  }

  /// Uniform integer draw in [0, bound) for shuffling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(engine_);
  }

  /// Direct engine access for std::shuffle and friends.
  std::mt19937_64& engine() { return engine_; }

 private:
  static std::mt19937_64 expanded(std::uint64_t seed) {
    SplitMix64 mix(seed);
    std::seed_seq seq{static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next()),
                      static_cast<std::uint32_t>(mix.next())};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tracklab
