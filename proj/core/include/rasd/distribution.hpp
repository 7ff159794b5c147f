// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rasd {

/// Token ids form the closed range [0, vocab_size). String tokenization lives
/// in the CLI; everything in the core works on ids.
using Token = std::int32_t;

/// Normalized probability vector over a finite vocabulary.
///
/// Construction rejects negative or non-finite entries and an all-zero vector,
/// then renormalizes so the entries sum to one. Instances are immutable.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Distribution() = default;
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t vocab_size);
  static Distribution point_mass(std::size_t vocab_size, Token token);

  std::size_t size() const { return probs_.size(); }
  bool empty() const { return probs_.empty(); }
  double operator[](Token t) const { return probs_[static_cast<std::size_t>(t)]; }
  std::span<const double> probs() const { return probs_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

/// Highest-probability token; ties go to the lowest id.
Token argmax(const Distribution& dist);

/// probs^(1/temperature), renormalized. temperature must be > 0; a temperature
/// of exactly 1 returns the input unchanged.
Distribution apply_temperature(const Distribution& dist, double temperature);

/// normalize(max(0, p - q)). Throws ZeroResidual when p <= q pointwise.
Distribution residual_distribution(const Distribution& p, const Distribution& q);

/// Half the L1 distance.
double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace rasd
