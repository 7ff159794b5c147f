// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rasd/distribution.hpp"
#include "rasd/rng.hpp"
#include "rasd/tree.hpp"

namespace rasd {

/// Anything that maps a token context to a next-token distribution. The engine
/// only talks to models through this interface.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual Distribution next_distribution(std::span<const Token> context) const = 0;

  /// Number of trailing context tokens the model can see. Callers may trim
  /// longer contexts to this length without changing the output.
  virtual std::size_t context_window() const { return std::numeric_limits<std::size_t>::max(); }
};

/// Back-off, additive-smoothed order-k n-gram model.
///
/// Holds counts for every context length 0..order. A query uses the longest
/// context suffix that was seen in training and smooths that row with alpha.
class MarkovModel final : public LanguageModel {
 public:
  struct CountRow {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
  };

  MarkovModel(std::size_t order, std::size_t vocab_size, double alpha);

  std::size_t vocab_size() const override { return vocab_size_; }
  std::size_t context_window() const override { return order_; }
  Distribution next_distribution(std::span<const Token> context) const override;

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }

  /// Count row for an exact context, or nullptr when that context was unseen.
  const CountRow* counts(std::span<const Token> context) const;
  std::size_t context_count() const;

  void add_observation(std::span<const Token> context, Token next);

 private:
  static std::string key_of(std::span<const Token> context);

  std::size_t order_;
  std::size_t vocab_size_;
  double alpha_;
  std::vector<std::unordered_map<std::string, CountRow>> tables_;  // indexed by context length
};

/// Counts every (context, next) pair for context lengths 0..order. When
/// vocab_size is 0 it is inferred as max token + 1. Throws EmptyCorpus.
MarkovModel train_markov(const std::vector<std::vector<Token>>& corpus, std::size_t order, double alpha,
                         std::size_t vocab_size = 0);

/// Committed tokens before the current root y0.
struct GenerationState {
  std::vector<Token> context;

  std::int64_t base_position() const { return static_cast<std::int64_t>(context.size()); }
};

struct SamplerConfig {
  double temperature = 0.0;  // 0 is greedy
  std::uint64_t seed = 0;
};

/// Counts target-model forward passes. A tree forward is one pass no matter
/// how many nodes it scores.
struct ForwardPassCounter {
  std::uint64_t passes = 0;
};

/// Scores every node of a flattened tree in one pass. Node i is conditioned on
/// state.context followed by the tokens its mask row selects, so its output
/// depends only on its ancestor path. Results are in flat order.
std::vector<Distribution> tree_forward(const LanguageModel& model, const GenerationState& state, const FlatTree& flat,
                                       ForwardPassCounter* counter = nullptr);

/// Greedy argmax at temperature 0 without touching the rng; otherwise one
/// uniform draw against probs^(1/T).
Token sample(const Distribution& dist, const SamplerConfig& cfg, Rng& rng);

/// Inverse-CDF draw from `dist` using one uniform variate.
Token sample_from(const Distribution& dist, double u);

}  // namespace rasd
