// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "rasd/errors.hpp"
#include "rasd/retrieval_tree.hpp"

namespace rasd {
namespace {

CandidateSet set_of(std::vector<std::vector<Token>> cands, std::vector<std::uint64_t> freq = {}) {
  CandidateSet s;
  for (std::size_t i = 0; i < cands.size(); ++i) s.add(cands[i], 1, freq.empty() ? 1 : freq[i]);
  return s;
}

TEST(BuildRetrievalTree, SharedPrefixMerged) {
  const TokenTree t = build_retrieval_tree(set_of({{4, 1}, {4, 2}}), 3);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.root_token(), 3);
  ASSERT_EQ(t.children(0).size(), 1u);
  const NodeId four = t.children(0)[0];
  EXPECT_EQ(t.node(four).token, 4);
  ASSERT_EQ(t.children(four).size(), 2u);
  EXPECT_EQ(t.node(t.children(four)[0]).token, 1);
  EXPECT_EQ(t.node(t.children(four)[1]).token, 2);
  for (NodeId i = 1; i < 4; ++i) {
    EXPECT_EQ(t.node(i).provenance, Provenance::kRetrieval);
    EXPECT_FALSE(t.node(i).draft_prob.has_value());
  }
}

TEST(BuildRetrievalTree, EmptySetIsRootOnly) {
  const TokenTree t = build_retrieval_tree({}, 5);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.root_token(), 5);
}

TEST(BuildRetrievalTree, PrefixCandidateIsOnePath) {
  const TokenTree t = build_retrieval_tree(set_of({{1}, {1, 2}}), 0);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.leaf_paths(), (std::vector<std::vector<Token>>{{0, 1, 2}}));
}

TEST(PrefixFilter, LargeBudgetKeepsOrder) {
  const CandidateSet in = set_of({{1, 2}, {3}}, {5, 1});
  EXPECT_EQ(prefix_frequency_filter(in, 100), in);
  const CandidateSet rev = set_of({{1, 2}, {3}}, {1, 5});
  EXPECT_EQ(prefix_frequency_filter(rev, 100), rev);
}

TEST(PrefixFilter, BudgetOneAdmitsHighestFrequencyThatFits) {
  const CandidateSet in = set_of({{4, 1}, {9}}, {2, 7});
  const CandidateSet out = prefix_frequency_filter(in, 1);
  EXPECT_EQ(out.candidates, (std::vector<std::vector<Token>>{{9}}));
  EXPECT_EQ(out.frequency, std::vector<std::uint64_t>{7});
}

TEST(PrefixFilter, SkipsOversizedAndContinues) {
  // [1,2,3] is most frequent but needs 3 nodes; [4] and [1] still fit in 2.
  const CandidateSet in = set_of({{1, 2, 3}, {4}, {1}}, {9, 3, 2});
  const CandidateSet out = prefix_frequency_filter(in, 2);
  EXPECT_EQ(out.candidates, (std::vector<std::vector<Token>>{{4}, {1}}));
}

TEST(PrefixFilter, SharedPrefixCostsOnlyNewNodes) {
  const CandidateSet in = set_of({{1, 2}, {1, 3}}, {5, 4});
  EXPECT_EQ(prefix_frequency_filter(in, 3).size(), 2u);
  EXPECT_EQ(prefix_frequency_filter(in, 2).size(), 1u);
}

TEST(PrefixFilter, ZeroBudgetRejected) {
  EXPECT_THROW(prefix_frequency_filter(set_of({{1}}), 0), ConfigInvalid);
}

TEST(Prune, RemovesNonTopKFirstTokens) {
  TokenTree t(0);
  const NodeId a = t.add_child(0, 1, std::nullopt, Provenance::kRetrieval);
  const NodeId b = t.add_child(0, 3, std::nullopt, Provenance::kRetrieval);
  t.add_child(a, 2, std::nullopt, Provenance::kRetrieval);
  t.add_child(b, 2, std::nullopt, Provenance::kRetrieval);
  const TokenTree p = prune_by_first_token(t, Distribution({0.05, 0.5, 0.3, 0.15}), PruneConfig{2, true});
  EXPECT_EQ(p.leaf_paths(), (std::vector<std::vector<Token>>{{0, 1, 2}}));
  EXPECT_TRUE(validate_tree(p).empty());
}

TEST(Prune, DisabledIsIdentity) {
  const TokenTree t = build_retrieval_tree(set_of({{3, 1}, {2}}), 0);
  const TokenTree p = prune_by_first_token(t, Distribution({0.97, 0.01, 0.01, 0.01}), PruneConfig{1, false});
  EXPECT_EQ(p.nodes().size(), t.nodes().size());
  EXPECT_EQ(p.leaf_paths(), t.leaf_paths());
}

TEST(Prune, AllRejectedLeavesRoot) {
  const TokenTree t = build_retrieval_tree(set_of({{3, 1}, {2}}), 0);
  const TokenTree p = prune_by_first_token(t, Distribution({0.7, 0.1, 0.1, 0.1}), PruneConfig{1, true});
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.root_token(), 0);
}

TEST(FilterTree, KeepsMarkedAncestorClosedSubset) {
  const TokenTree t = build_retrieval_tree(set_of({{1, 2}, {3}}), 0);
  const TokenTree f = filter_tree(t, {true, true, true, false});
  EXPECT_EQ(f.leaf_paths(), (std::vector<std::vector<Token>>{{0, 1, 2}}));
}

}  // namespace
}  // namespace rasd
