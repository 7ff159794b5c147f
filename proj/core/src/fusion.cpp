// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/fusion.hpp"

#include <string>

#include "rasd/errors.hpp"

namespace rasd {

namespace {

void check_roots(const DraftResult& draft, const TokenTree& retrieval) {
  if (draft.tree.root_token() != retrieval.root_token()) {
    throw RootMismatch("draft root " + std::to_string(draft.tree.root_token()) + " vs retrieval root " +
                       std::to_string(retrieval.root_token()));
  }
}

Provenance provenance_of(bool in_draft, bool in_retrieval) {
  if (in_draft && in_retrieval) return Provenance::kFused;
  return in_draft ? Provenance::kDraft : Provenance::kRetrieval;
}

struct Membership {
  std::vector<bool> in_draft;
  std::vector<bool> in_retrieval;
  std::vector<NodeId> draft_source;  // draft node id, or kRootParent
};

FusedTree finish(TokenTree tree, const Membership& m, const DraftResult& draft) {
  FusedTree out;
  const std::size_t n = tree.size();
  out.node_q.assign(n, std::nullopt);
  out.draft_conditionals.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<NodeId>(i);
    tree.set_provenance(id, provenance_of(m.in_draft[i], m.in_retrieval[i]));
    if (m.draft_source[i] != kRootParent) {
      const auto src = static_cast<std::size_t>(m.draft_source[i]);
      out.node_q[i] = draft.tree.node(m.draft_source[i]).draft_prob;
      tree.set_draft_prob(id, out.node_q[i]);
      if (src < draft.conditionals.size()) out.draft_conditionals[i] = draft.conditionals[src];
    }
  }
  out.tree = std::move(tree);
  return out;
}

}  // namespace

FusedTree fuse_trees(const DraftResult& draft, const TokenTree& retrieval, const FusionOptions& opts) {
  check_roots(draft, retrieval);
  TokenTree tree(draft.tree.root_token());
  Membership m{{true}, {true}, {0}};

  auto insert = [&](const TokenTree& src, bool is_draft) {
    std::vector<NodeId> remap(src.size(), 0);
    for (NodeId id = 1; id < static_cast<NodeId>(src.size()); ++id) {
      const TreeNode& n = src.node(id);
      const NodeId parent = remap[static_cast<std::size_t>(n.parent)];
      NodeId target;
      if (auto hit = tree.find_child(parent, n.token)) {
        target = *hit;
      } else {
        target = tree.add_child(parent, n.token, std::nullopt, Provenance::kDraft);
        m.in_draft.push_back(false);
        m.in_retrieval.push_back(false);
        m.draft_source.push_back(kRootParent);
      }
      const auto t = static_cast<std::size_t>(target);
      if (is_draft) {
        m.in_draft[t] = true;
        m.draft_source[t] = id;
      } else {
        m.in_retrieval[t] = true;
      }
      remap[static_cast<std::size_t>(id)] = target;
    }
  };

  if (opts.draft_children_first) {
    insert(draft.tree, true);
    insert(retrieval, false);
  } else {
    insert(retrieval, false);
    insert(draft.tree, true);
  }

  return finish(std::move(tree), m, draft);
}

FusedTree union_trees(const DraftResult& draft, const TokenTree& retrieval) {
  check_roots(draft, retrieval);
  TokenTree tree = draft.tree;
  Membership m;
  m.in_draft.assign(tree.size(), true);
  m.in_retrieval.assign(tree.size(), false);
  m.draft_source.resize(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) m.draft_source[i] = static_cast<NodeId>(i);
  m.in_retrieval[0] = true;

  std::vector<NodeId> remap(retrieval.size(), 0);
  for (NodeId id = 1; id < static_cast<NodeId>(retrieval.size()); ++id) {
    const TreeNode& n = retrieval.node(id);
    remap[static_cast<std::size_t>(id)] =
        tree.add_child(remap[static_cast<std::size_t>(n.parent)], n.token, std::nullopt, Provenance::kRetrieval);
    m.in_draft.push_back(false);
    m.in_retrieval.push_back(true);
    m.draft_source.push_back(kRootParent);
  }
  return finish(std::move(tree), m, draft);
}

FlatTree flatten_fused(const FusedTree& fused, std::int64_t base_position) {
  return flatten_level_order(fused.tree, base_position);
}

}  // namespace rasd
