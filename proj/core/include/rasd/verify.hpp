// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rasd/distribution.hpp"
#include "rasd/fusion.hpp"
#include "rasd/rng.hpp"
#include "rasd/tree.hpp"

namespace rasd {

struct VerifyOutcome {
  std::vector<Token> accepted_path;   // depth-1 child downward
  std::vector<NodeId> accepted_nodes; // tree ids of accepted_path
  Token final_token = 0;              // bonus or resampled token

  std::size_t accepted_count() const { return accepted_path.size(); }
};

/// Proposal distribution assumed for each child during stochastic verification.
enum class AcceptanceRule {
  /// Every child is treated as a deterministic proposal (q = point mass at its
  /// token). Exactly lossless for any fixed tree.
  kPointMass,
  /// Draft children use the draft conditional at their parent as q; retrieval
  /// children use a point mass. Lossless only when draft children were sampled
  /// from that conditional, which the top-k draft tree does not do.
  kDraftConditional,
};

/// Greedy verification. At each node the target argmax t* is compared with
/// the children; the matching child is accepted and the walk descends. When
/// several children carry t* (only possible in an unmerged union) the one
/// with the longest accepted continuation wins, first in child order on ties.
/// node_dists is indexed by tree node id.
VerifyOutcome verify_greedy(std::span<const Distribution> node_dists, const TokenTree& tree);

/// Recursive multi-candidate speculative sampling. Children are tried in tree
/// child order: accept x with probability min(1, r(x)/q(x)); on rejection
/// r <- normalize(max(0, r - q)) and the next child is tried. After the last
/// rejection the final token is drawn from r. One rng draw per acceptance test
/// plus one for the final token.
VerifyOutcome verify_stochastic(std::span<const Distribution> node_dists, const FusedTree& fused, Rng& rng,
                                AcceptanceRule rule = AcceptanceRule::kPointMass);

}  // namespace rasd
