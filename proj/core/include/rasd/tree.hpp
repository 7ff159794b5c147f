// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rasd/distribution.hpp"

namespace rasd {

using NodeId = std::int32_t;
inline constexpr NodeId kRootParent = -1;

enum class Provenance : std::uint8_t { kDraft, kRetrieval, kFused };

const char* to_string(Provenance p);

struct TreeNode {
  Token token = 0;
  NodeId parent = kRootParent;
  std::int32_t depth = 0;
  std::optional<double> draft_prob;  // absent for retrieval-only nodes
  Provenance provenance = Provenance::kDraft;
};

/// Token tree rooted at y0. Node 0 is the root; every node's parent has a
/// smaller index. Child order is insertion order and is what verification
/// iterates over.
class TokenTree {
 public:
  TokenTree() : TokenTree(0) {}
  explicit TokenTree(Token root_token, Provenance root_provenance = Provenance::kDraft);

  /// Wraps raw nodes without checking them. Used for validation and for
  /// rebuilding trees from external data; child lists follow index order and
  /// out-of-range parents are simply not linked.
  static TokenTree from_nodes(std::vector<TreeNode> nodes);

  NodeId add_child(NodeId parent, Token token, std::optional<double> draft_prob, Provenance provenance);

  /// First child of `parent` carrying `token`.
  std::optional<NodeId> find_child(NodeId parent, Token token) const;

  std::size_t size() const { return nodes_.size(); }
  Token root_token() const { return nodes_.front().token; }
  const TreeNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<NodeId>& children(NodeId id) const { return children_[static_cast<std::size_t>(id)]; }

  void set_provenance(NodeId id, Provenance p) { nodes_[static_cast<std::size_t>(id)].provenance = p; }
  void set_draft_prob(NodeId id, std::optional<double> q) { nodes_[static_cast<std::size_t>(id)].draft_prob = q; }

  /// Tokens from the root to `id`, both inclusive.
  std::vector<Token> path_tokens(NodeId id) const;

  /// Every root-to-leaf token path (root included), in depth-first child order.
  std::vector<std::vector<Token>> leaf_paths() const;

  std::int32_t max_depth() const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
};

enum class ViolationKind : std::uint8_t {
  kEmptyTree,
  kRootHasParent,
  kMultipleRoots,
  kParentOutOfRange,
  kCycle,
  kUnreachable,
  kParentAfterChild,
  kDepthMismatch,
  kDuplicateSiblingToken,
  kTokenOutOfRange,
  kBadDraftProb,
};

struct Violation {
  NodeId node;
  ViolationKind kind;
  std::string message;
};

/// Every invariant violation in the tree; empty means well-formed. Token range
/// is checked only when `vocab_size` is given.
std::vector<Violation> validate_tree(const TokenTree& tree, std::optional<std::size_t> vocab_size = std::nullopt);

/// True for violations that make a tree impossible to flatten (as opposed to
/// content problems such as duplicate sibling tokens).
bool is_structural(ViolationKind kind);

/// mask(i, j) is true iff flat node j is an ancestor of flat node i or j == i.
class AncestorMask {
 public:
  AncestorMask() = default;
  explicit AncestorMask(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j) { bits_[i * n_ + j] = 1; }
  std::size_t row_count(std::size_t i) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Tree-attention view of a token tree: level order, absolute positions, and
/// the ancestor mask.
struct FlatTree {
  std::vector<Token> tokens;
  std::vector<std::int64_t> positions;
  std::vector<NodeId> node_of;        // flat index -> tree node id
  std::vector<std::int32_t> parent;   // flat index of parent, -1 for the root
  AncestorMask mask;

  std::size_t size() const { return tokens.size(); }
};

/// Level order with ties inside a level broken by parent flat index, then
/// token id, then child order. positions[i] = base_position + depth(i).
/// Throws MalformedTree on any structural violation.
FlatTree flatten_level_order(const TokenTree& tree, std::int64_t base_position);

/// Reorders per-flat-index values into tree node order.
template <typename T>
std::vector<T> to_tree_order(const FlatTree& flat, std::vector<T> by_flat_index) {
  std::vector<T> out(by_flat_index.size());
  for (std::size_t i = 0; i < flat.node_of.size(); ++i) {
    out[static_cast<std::size_t>(flat.node_of[i])] = std::move(by_flat_index[i]);
  }
  return out;
}

}  // namespace rasd
