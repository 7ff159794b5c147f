// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "rasd/datastore.hpp"
#include "rasd/distribution.hpp"
#include "rasd/tree.hpp"

namespace rasd {

struct PruneConfig {
  std::size_t top_k = 8;
  bool enabled = true;
};

/// Trie of the candidates rooted at y0. Non-root nodes are RETRIEVAL nodes
/// without a draft probability.
TokenTree build_retrieval_tree(const CandidateSet& candidates, Token y0);

/// Admits candidates by (frequency desc, match_len desc, insertion order) as
/// long as the trie of admitted candidates stays within `node_budget` non-root
/// nodes. Candidates that would overflow the budget are skipped. The result
/// keeps the input's relative order.
CandidateSet prefix_frequency_filter(const CandidateSet& candidates, std::size_t node_budget);

/// Drops every depth-1 subtree whose token is outside the top-k of P1.
TokenTree prune_by_first_token(const TokenTree& tree, const Distribution& first_distribution, const PruneConfig& cfg);

/// Copy of `tree` holding only the nodes for which keep[id] is true. Kept
/// nodes must have kept parents; the root is always kept.
TokenTree filter_tree(const TokenTree& tree, const std::vector<bool>& keep);

}  // namespace rasd
