// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "rasd/distribution.hpp"
#include "rasd/errors.hpp"
#include "rasd/tree.hpp"

namespace rasd {
namespace {

TokenTree example_tree() {
  TokenTree t(5);
  const NodeId a = t.add_child(0, 1, 0.5, Provenance::kDraft);
  t.add_child(0, 2, 0.3, Provenance::kDraft);
  t.add_child(a, 7, 0.2, Provenance::kDraft);
  return t;
}

TEST(Flatten, LevelOrderTokensAndPositions) {
  const FlatTree f = flatten_level_order(example_tree(), 10);
  EXPECT_EQ(f.tokens, (std::vector<Token>{5, 1, 2, 7}));
  EXPECT_EQ(f.positions, (std::vector<std::int64_t>{10, 11, 11, 12}));
  EXPECT_EQ(f.parent, (std::vector<std::int32_t>{-1, 0, 0, 1}));
}

TEST(Flatten, Singleton) {
  const FlatTree f = flatten_level_order(TokenTree(3), 0);
  EXPECT_EQ(f.tokens, std::vector<Token>{3});
  EXPECT_EQ(f.positions, std::vector<std::int64_t>{0});
  ASSERT_EQ(f.mask.size(), 1u);
  EXPECT_TRUE(f.mask(0, 0));
}

TEST(Flatten, ChainIsFullCausalMask) {
  TokenTree t(0);
  const NodeId a = t.add_child(0, 1, std::nullopt, Provenance::kRetrieval);
  t.add_child(a, 2, std::nullopt, Provenance::kRetrieval);
  const FlatTree f = flatten_level_order(t, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(f.mask(i, j), j <= i) << i << "," << j;
  }
}

TEST(Flatten, TieBreakUsesTokenWithinParent) {
  // Children inserted out of token order still flatten by token id.
  TokenTree t(0);
  t.add_child(0, 9, std::nullopt, Provenance::kDraft);
  t.add_child(0, 3, std::nullopt, Provenance::kDraft);
  const FlatTree f = flatten_level_order(t, 0);
  EXPECT_EQ(f.tokens, (std::vector<Token>{0, 3, 9}));
  EXPECT_EQ(f.node_of, (std::vector<NodeId>{0, 2, 1}));
}

TEST(Flatten, RejectsCycle) {
  std::vector<TreeNode> nodes{{0, kRootParent, 0, std::nullopt, Provenance::kDraft},
                              {1, 2, 1, std::nullopt, Provenance::kDraft},
                              {2, 1, 2, std::nullopt, Provenance::kDraft}};
  EXPECT_THROW(flatten_level_order(TokenTree::from_nodes(nodes), 0), MalformedTree);
}

TEST(Validate, WellFormedTreeIsOk) {
  TokenTree t = example_tree();
  t.add_child(1, 4, 0.1, Provenance::kDraft);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_TRUE(validate_tree(t, 10).empty());
}

TEST(Validate, SelfParentIsCycle) {
  std::vector<TreeNode> nodes{{0, kRootParent, 0, std::nullopt, Provenance::kDraft},
                              {1, 1, 1, std::nullopt, Provenance::kDraft}};
  const auto v = validate_tree(TokenTree::from_nodes(nodes));
  ASSERT_FALSE(v.empty());
  const bool found = std::any_of(v.begin(), v.end(), [](const Violation& x) {
    return x.kind == ViolationKind::kCycle && x.node == 1 && x.message == "cycle at node 1";
  });
  EXPECT_TRUE(found);
}

TEST(Validate, DuplicateSiblingToken) {
  std::vector<TreeNode> nodes{{0, kRootParent, 0, std::nullopt, Provenance::kDraft},
                              {4, 0, 1, std::nullopt, Provenance::kDraft},
                              {4, 0, 1, std::nullopt, Provenance::kRetrieval}};
  const auto v = validate_tree(TokenTree::from_nodes(nodes));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kDuplicateSiblingToken);
  EXPECT_NE(v[0].message.find("duplicate sibling token"), std::string::npos);
  EXPECT_FALSE(is_structural(v[0].kind));
}

TEST(Validate, DepthMismatchAndRange) {
  std::vector<TreeNode> nodes{{0, kRootParent, 0, std::nullopt, Provenance::kDraft},
                              {12, 0, 3, 1.5, Provenance::kDraft}};
  const auto v = validate_tree(TokenTree::from_nodes(nodes), 8);
  auto has = [&](ViolationKind k) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
  };
  EXPECT_TRUE(has(ViolationKind::kDepthMismatch));
  EXPECT_TRUE(has(ViolationKind::kTokenOutOfRange));
  EXPECT_TRUE(has(ViolationKind::kBadDraftProb));
}

TEST(Validate, EmptyAndOrder) {
  EXPECT_EQ(validate_tree(TokenTree::from_nodes({})).front().kind, ViolationKind::kEmptyTree);
  std::vector<TreeNode> nodes{{0, kRootParent, 0, std::nullopt, Provenance::kDraft},
                              {1, 2, 2, std::nullopt, Provenance::kDraft},
                              {2, 0, 1, std::nullopt, Provenance::kDraft}};
  const auto v = validate_tree(TokenTree::from_nodes(nodes));
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, ViolationKind::kParentAfterChild);
}

TEST(Residual, PointMassSubtraction) {
  const auto r = residual_distribution(Distribution({0.5, 0.5}), Distribution({1.0, 0.0}));
  EXPECT_EQ(r, Distribution({0.0, 1.0}));
}

TEST(Residual, HandComputed) {
  const auto r = residual_distribution(Distribution({0.6, 0.3, 0.1}), Distribution({0.2, 0.7, 0.1}));
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 0.0);
  EXPECT_DOUBLE_EQ(r[2], 0.0);
}

TEST(Residual, IdenticalThrows) {
  const auto u = Distribution::uniform(4);
  EXPECT_THROW(residual_distribution(u, u), ZeroResidual);
}

TEST(DistributionType, ValidatesInput) {
  EXPECT_EQ(Distribution({1.0, 3.0}), Distribution({0.25, 0.75}));
  EXPECT_THROW(Distribution({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Distribution({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(Distribution(std::vector<double>{}), std::invalid_argument);
  EXPECT_EQ(argmax(Distribution({0.5, 0.5})), 0);
  EXPECT_EQ(argmax(Distribution({0.1, 0.7, 0.2})), 1);
}

TEST(DistributionType, Temperature) {
  const Distribution d({0.2, 0.8});
  EXPECT_EQ(apply_temperature(d, 1.0), d);
  const auto sharp = apply_temperature(d, 0.5);
  EXPECT_NEAR(sharp[1], 0.64 / 0.68, 1e-12);
  EXPECT_THROW(apply_temperature(d, 0.0), std::invalid_argument);
}

TEST(DistributionType, TotalVariation) {
  const std::vector<double> a{0.5, 0.5}, b{0.2, 0.8};
  EXPECT_NEAR(total_variation(a, b), 0.3, 1e-15);
}

}  // namespace
}  // namespace rasd
