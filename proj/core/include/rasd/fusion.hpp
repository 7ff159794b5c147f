// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "rasd/distribution.hpp"
#include "rasd/draft.hpp"
#include "rasd/tree.hpp"

namespace rasd {

/// Tree handed to verification. node_q is present iff the node came from the
/// draft tree; draft_conditionals carries the draft distribution at nodes the
/// draft model expanded.
struct FusedTree {
  TokenTree tree;
  std::vector<std::optional<double>> node_q;
  std::vector<std::optional<Distribution>> draft_conditionals;

  std::size_t size() const { return tree.size(); }
};

struct FusionOptions {
  bool draft_children_first = true;
};

/// Longest-prefix merge of the draft and retrieval trees into one trie rooted
/// at y0. Nodes present in both become FUSED and keep the draft probability.
/// Throws RootMismatch when the roots differ.
FusedTree fuse_trees(const DraftResult& draft, const TokenTree& retrieval, const FusionOptions& opts = {});

/// Both trees hung under a shared root with no prefix merging; sibling tokens
/// may repeat. This is the "no fusion" arm.
FusedTree union_trees(const DraftResult& draft, const TokenTree& retrieval);

/// Attention view of the merged topology.
FlatTree flatten_fused(const FusedTree& fused, std::int64_t base_position);

}  // namespace rasd
