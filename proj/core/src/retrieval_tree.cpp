// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/retrieval_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "rasd/draft.hpp"
#include "rasd/errors.hpp"

namespace rasd {

TokenTree build_retrieval_tree(const CandidateSet& candidates, Token y0) {
  TokenTree tree(y0, Provenance::kRetrieval);
  for (const auto& cand : candidates.candidates) {
    NodeId cur = 0;
    for (Token t : cand) {
      auto next = tree.find_child(cur, t);
      cur = next ? *next : tree.add_child(cur, t, std::nullopt, Provenance::kRetrieval);
    }
  }
  return tree;
}

CandidateSet prefix_frequency_filter(const CandidateSet& candidates, std::size_t node_budget) {
  if (node_budget < 1) throw ConfigInvalid("prefix_frequency_filter: node_budget must be >= 1");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (candidates.frequency[a] != candidates.frequency[b]) return candidates.frequency[a] > candidates.frequency[b];
    return candidates.match_len[a] > candidates.match_len[b];
  });

  // Admitted prefixes; the trie size is the number of distinct non-empty prefixes.
  std::set<std::vector<Token>> prefixes;
  std::vector<bool> admitted(candidates.size(), false);
  for (std::size_t idx : order) {
    const auto& cand = candidates.candidates[idx];
    std::size_t fresh = 0;
    for (std::size_t len = 1; len <= cand.size(); ++len) {
      if (!prefixes.contains(std::vector<Token>(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(len)))) {
        ++fresh;
      }
    }
    if (prefixes.size() + fresh > node_budget) continue;
    for (std::size_t len = 1; len <= cand.size(); ++len) {
      prefixes.emplace(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(len));
    }
    admitted[idx] = true;
  }

  CandidateSet out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (admitted[i]) out.add(candidates.candidates[i], candidates.match_len[i], candidates.frequency[i]);
  }
  return out;
}

TokenTree filter_tree(const TokenTree& tree, const std::vector<bool>& keep) {
  TokenTree out(tree.root_token(), tree.node(0).provenance);
  std::vector<NodeId> remap(tree.size(), kRootParent);
  remap[0] = 0;
  for (NodeId id = 1; id < static_cast<NodeId>(tree.size()); ++id) {
    if (!keep[static_cast<std::size_t>(id)]) continue;
    const TreeNode& n = tree.node(id);
    const NodeId parent = remap[static_cast<std::size_t>(n.parent)];
    if (parent == kRootParent) continue;
    remap[static_cast<std::size_t>(id)] = out.add_child(parent, n.token, n.draft_prob, n.provenance);
  }
  return out;
}

TokenTree prune_by_first_token(const TokenTree& tree, const Distribution& first_distribution, const PruneConfig& cfg) {
  if (!cfg.enabled) return tree;
  const auto allowed_list = top_k_tokens(first_distribution, cfg.top_k);
  const std::set<Token> allowed(allowed_list.begin(), allowed_list.end());
  std::vector<bool> keep(tree.size(), true);
  for (NodeId id = 1; id < static_cast<NodeId>(tree.size()); ++id) {
    const TreeNode& n = tree.node(id);
    if (n.parent == 0) {
      keep[static_cast<std::size_t>(id)] = allowed.contains(n.token);
    } else {
      keep[static_cast<std::size_t>(id)] = keep[static_cast<std::size_t>(n.parent)];
    }
  }
  return filter_tree(tree, keep);
}

}  // namespace rasd
