// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rasd/distribution.hpp"
#include "rasd/models.hpp"
#include "rasd/tree.hpp"

namespace rasd {

struct DraftConfig {
  std::size_t max_depth = 6;    // draft length m
  std::size_t branch_k = 8;     // children proposed per expanded node
  std::size_t layer_beam = 8;   // nodes kept for expansion per layer
  std::size_t total_nodes = 60; // final budget, root excluded

  void validate(std::size_t vocab_size) const;
};

struct DraftResult {
  TokenTree tree;
  Distribution first_distribution;              // P1 = draft(. | context, y0)
  std::vector<double> cumulative;               // per tree node; 1 at the root
  std::vector<std::optional<Distribution>> conditionals;  // draft distribution at each expanded node
  std::uint64_t forward_passes = 0;             // one per expanded layer
};

/// The k most probable tokens, descending, ties by lowest id. Throws BadK
/// unless 1 <= k <= vocab size.
std::vector<Token> top_k_tokens(const Distribution& dist, std::size_t k);

/// Dynamic draft tree: beam expansion by cumulative probability followed by a
/// global rerank that keeps the `total_nodes` best nodes.
DraftResult generate_draft_tree(const LanguageModel& draft_model, const GenerationState& state, Token y0,
                                const DraftConfig& cfg);

}  // namespace rasd
