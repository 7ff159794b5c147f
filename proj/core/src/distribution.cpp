// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rasd/errors.hpp"

namespace rasd {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("Distribution: empty vocabulary");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("Distribution: entries must be finite and non-negative");
    }
    sum += p;
  }
  if (sum <= 0.0) throw std::invalid_argument("Distribution: all entries are zero");
  if (sum != 1.0) {
    for (double& p : probs_) p /= sum;
  }
}

Distribution Distribution::uniform(std::size_t vocab_size) {
  return Distribution(std::vector<double>(vocab_size, 1.0));
}

Distribution Distribution::point_mass(std::size_t vocab_size, Token token) {
  if (token < 0 || static_cast<std::size_t>(token) >= vocab_size) {
    throw std::out_of_range("point_mass: token outside vocabulary");
  }
  std::vector<double> probs(vocab_size, 0.0);
  probs[static_cast<std::size_t>(token)] = 1.0;
  return Distribution(std::move(probs));
}

Token argmax(const Distribution& dist) {
  auto probs = dist.probs();
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return static_cast<Token>(best);
}

Distribution apply_temperature(const Distribution& dist, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("apply_temperature: temperature must be > 0");
  if (temperature == 1.0) return dist;
  const double exponent = 1.0 / temperature;
  std::vector<double> out(dist.size());
  auto probs = dist.probs();
  // Scale by the max first so large exponents do not underflow to all zeros.
  double peak = 0.0;
  for (double p : probs) peak = std::max(peak, p);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = probs[i] == 0.0 ? 0.0 : std::pow(probs[i] / peak, exponent);
  }
  return Distribution(std::move(out));
}

Distribution residual_distribution(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("residual_distribution: vocabulary mismatch");
  std::vector<double> diff(p.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const auto t = static_cast<Token>(i);
    diff[i] = std::max(0.0, p[t] - q[t]);
    sum += diff[i];
  }
  if (sum == 0.0) throw ZeroResidual("max(0, p - q) is identically zero");
  return Distribution(std::move(diff));
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

}  // namespace rasd
