// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "rasd/errors.hpp"
#include "rasd/models.hpp"

namespace rasd {

namespace {

void check_sizes(std::span<const Distribution> node_dists, const TokenTree& tree) {
  if (node_dists.size() != tree.size()) {
    throw std::invalid_argument("verify: one distribution per tree node is required");
  }
}

}  // namespace

VerifyOutcome verify_greedy(std::span<const Distribution> node_dists, const TokenTree& tree) {
  check_sizes(node_dists, tree);
  const std::size_t n = tree.size();
  std::vector<Token> best_token(n);
  for (std::size_t i = 0; i < n; ++i) best_token[i] = argmax(node_dists[i]);

  // gain[i]: tokens accepted below node i; next[i]: the child that achieves it.
  std::vector<std::size_t> gain(n, 0);
  std::vector<NodeId> next(n, kRootParent);
  for (std::size_t i = n; i-- > 0;) {
    for (NodeId c : tree.children(static_cast<NodeId>(i))) {
      if (tree.node(c).token != best_token[i]) continue;
      const std::size_t g = 1 + gain[static_cast<std::size_t>(c)];
      if (next[i] == kRootParent || g > gain[i]) {
        gain[i] = g;
        next[i] = c;
      }
    }
  }

  VerifyOutcome out;
  NodeId cur = 0;
  while (next[static_cast<std::size_t>(cur)] != kRootParent) {
    cur = next[static_cast<std::size_t>(cur)];
    out.accepted_nodes.push_back(cur);
    out.accepted_path.push_back(tree.node(cur).token);
  }
  out.final_token = best_token[static_cast<std::size_t>(cur)];
  return out;
}

VerifyOutcome verify_stochastic(std::span<const Distribution> node_dists, const FusedTree& fused, Rng& rng,
                                AcceptanceRule rule) {
  const TokenTree& tree = fused.tree;
  check_sizes(node_dists, tree);
  const std::size_t vocab = node_dists[0].size();

  VerifyOutcome out;
  NodeId cur = 0;
  for (;;) {
    Distribution residual = node_dists[static_cast<std::size_t>(cur)];
    NodeId accepted = kRootParent;
    for (NodeId child : tree.children(cur)) {
      const Token x = tree.node(child).token;
      const bool use_conditional = rule == AcceptanceRule::kDraftConditional &&
                                   fused.node_q[static_cast<std::size_t>(child)].has_value() &&
                                   fused.draft_conditionals[static_cast<std::size_t>(cur)].has_value();
      const Distribution q = use_conditional ? *fused.draft_conditionals[static_cast<std::size_t>(cur)]
                                             : Distribution::point_mass(vocab, x);
      const double ratio = q[x] > 0.0 ? residual[x] / q[x] : 0.0;
      const double accept_prob = std::min(1.0, ratio);
      if (rng.uniform() < accept_prob) {
        accepted = child;
        break;
      }
      try {
        residual = residual_distribution(residual, q);
      } catch (const ZeroResidual&) {
        throw InvariantBreach("zero residual after rejecting token " + std::to_string(x) +
                              " with acceptance probability " + std::to_string(accept_prob));
      }
    }
    if (accepted == kRootParent) {
      out.final_token = sample_from(residual, rng.uniform());
      return out;
    }
    out.accepted_nodes.push_back(accepted);
    out.accepted_path.push_back(tree.node(accepted).token);
    cur = accepted;
  }
}

}  // namespace rasd
