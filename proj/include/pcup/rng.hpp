// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_RNG_HPP
#define PCUP_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace pcup {

struct RngSeed {
  std::uint64_t value = 0;
};

/// mt19937_64 with hand-written conversions so that streams are identical
/// across standard libraries (std::*_distribution output is
/// implementation-defined).
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, stream id), e.g. one per patch.
  static Rng derive(RngSeed seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::size_t below(std::size_t n);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one draw per call, no caching).
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pcup

#endif  // PCUP_RNG_HPP
