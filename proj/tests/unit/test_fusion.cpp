// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "rasd/errors.hpp"
#include "rasd/fusion.hpp"
#include "rasd/retrieval_tree.hpp"

namespace rasd {
namespace {

DraftResult draft_of(TokenTree t) {
  DraftResult d;
  d.tree = std::move(t);
  d.first_distribution = Distribution::uniform(10);
  d.cumulative.assign(d.tree.size(), 1.0);
  d.conditionals.assign(d.tree.size(), std::nullopt);
  return d;
}

DraftResult example_draft() {
  TokenTree t(5);
  const NodeId one = t.add_child(0, 1, 0.7, Provenance::kDraft);
  t.add_child(one, 2, 0.6, Provenance::kDraft);
  t.add_child(one, 3, 0.3, Provenance::kDraft);
  return draft_of(std::move(t));
}

TokenTree example_retrieval() {
  CandidateSet s;
  s.add({1, 2, 7}, 1, 1);
  s.add({4}, 1, 1);
  return build_retrieval_tree(s, 5);
}

TEST(Fuse, HandMergedExample) {
  const FusedTree f = fuse_trees(example_draft(), example_retrieval());
  EXPECT_EQ(f.size(), 6u);
  auto paths = f.tree.leaf_paths();
  std::sort(paths.begin(), paths.end());
  EXPECT_EQ(paths, (std::vector<std::vector<Token>>{{5, 1, 2, 7}, {5, 1, 3}, {5, 4}}));
  const NodeId one = *f.tree.find_child(0, 1);
  const NodeId two = *f.tree.find_child(one, 2);
  const NodeId three = *f.tree.find_child(one, 3);
  const NodeId seven = *f.tree.find_child(two, 7);
  const NodeId four = *f.tree.find_child(0, 4);
  EXPECT_EQ(f.tree.node(one).provenance, Provenance::kFused);
  EXPECT_EQ(f.tree.node(two).provenance, Provenance::kFused);
  EXPECT_EQ(f.tree.node(three).provenance, Provenance::kDraft);
  EXPECT_EQ(f.tree.node(seven).provenance, Provenance::kRetrieval);
  EXPECT_EQ(f.tree.node(four).provenance, Provenance::kRetrieval);
  EXPECT_EQ(f.node_q[static_cast<std::size_t>(one)], 0.7);
  EXPECT_EQ(f.node_q[static_cast<std::size_t>(two)], 0.6);
  EXPECT_FALSE(f.node_q[static_cast<std::size_t>(seven)].has_value());
  // Draft children come before retrieval-only children.
  EXPECT_EQ(f.tree.children(0), (std::vector<NodeId>{one, four}));
  EXPECT_TRUE(validate_tree(f.tree).empty());
}

TEST(Fuse, FlattenPositions) {
  const FlatTree flat = flatten_fused(fuse_trees(example_draft(), example_retrieval()), 100);
  EXPECT_EQ(flat.tokens, (std::vector<Token>{5, 1, 4, 2, 3, 7}));
  EXPECT_EQ(flat.positions, (std::vector<std::int64_t>{100, 101, 101, 102, 102, 103}));
}

TEST(Fuse, RootOnlyRetrievalIsIdentity) {
  const DraftResult d = example_draft();
  const FusedTree f = fuse_trees(d, TokenTree(5));
  EXPECT_EQ(f.tree.leaf_paths(), d.tree.leaf_paths());
  EXPECT_EQ(f.size(), d.tree.size());
  const FlatTree a = flatten_fused(f, 7), b = flatten_level_order(d.tree, 7);
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_EQ(a.parent, b.parent);
}

TEST(Fuse, RootOnlyFlattensToBase) {
  const FusedTree f = fuse_trees(draft_of(TokenTree(5)), TokenTree(5));
  const FlatTree flat = flatten_fused(f, 42);
  EXPECT_EQ(flat.positions, std::vector<std::int64_t>{42});
  EXPECT_EQ(f.tree.node(0).provenance, Provenance::kFused);
}

TEST(Fuse, DisjointFirstTokens) {
  CandidateSet s;
  s.add({8, 9}, 1, 1);
  s.add({6}, 1, 1);
  const TokenTree r = build_retrieval_tree(s, 5);
  const DraftResult d = example_draft();
  EXPECT_EQ(fuse_trees(d, r).size(), d.tree.size() + r.size() - 1);
}

TEST(Fuse, RootMismatchThrows) {
  EXPECT_THROW(fuse_trees(example_draft(), TokenTree(6)), RootMismatch);
  EXPECT_THROW(union_trees(example_draft(), TokenTree(6)), RootMismatch);
}

TEST(Union, KeepsDuplicatesSideBySide) {
  const DraftResult d = example_draft();
  const TokenTree r = example_retrieval();
  const FusedTree u = union_trees(d, r);
  EXPECT_EQ(u.size(), d.tree.size() + r.size() - 1);
  // Two root children carry token 1: one from each source.
  std::size_t ones = 0;
  for (NodeId c : u.tree.children(0)) ones += u.tree.node(c).token == 1 ? 1 : 0;
  EXPECT_EQ(ones, 2u);
  const auto v = validate_tree(u.tree);
  for (const auto& x : v) EXPECT_FALSE(is_structural(x.kind)) << x.message;
  EXPECT_NO_THROW(flatten_fused(u, 0));
}

}  // namespace
}  // namespace rasd
