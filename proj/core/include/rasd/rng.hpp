// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace rasd {

/// Seeded, splittable random stream owned by one decoding session.
///
/// Every consumer draws through `uniform()`, which advances the engine by
/// exactly one 64-bit output. Verification and sampling therefore interleave
/// in a fixed, reproducible order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Uniform in [0, 1) with 53 bits of resolution; one engine step.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Independent child stream; does not advance this stream.
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x9e3779b97f4a7c15ULL))); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rasd
