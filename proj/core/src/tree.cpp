// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/tree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "rasd/errors.hpp"

namespace rasd {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kDraft: return "draft";
    case Provenance::kRetrieval: return "retrieval";
    case Provenance::kFused: return "fused";
  }
  return "unknown";
}

TokenTree::TokenTree(Token root_token, Provenance root_provenance) {
  nodes_.push_back(TreeNode{root_token, kRootParent, 0, std::nullopt, root_provenance});
  children_.emplace_back();
}

TokenTree TokenTree::from_nodes(std::vector<TreeNode> nodes) {
  TokenTree tree;
  tree.nodes_ = std::move(nodes);
  tree.children_.assign(tree.nodes_.size(), {});
  const auto n = static_cast<NodeId>(tree.nodes_.size());
  for (NodeId i = 0; i < n; ++i) {
    const NodeId parent = tree.nodes_[static_cast<std::size_t>(i)].parent;
    if (parent >= 0 && parent < n && parent != i) tree.children_[static_cast<std::size_t>(parent)].push_back(i);
  }
  return tree;
}

NodeId TokenTree::add_child(NodeId parent, Token token, std::optional<double> draft_prob, Provenance provenance) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::out_of_range("add_child: parent out of range");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{token, parent, node(parent).depth + 1, draft_prob, provenance});
  children_.emplace_back();
  children_[static_cast<std::size_t>(parent)].push_back(id);
  return id;
}

std::optional<NodeId> TokenTree::find_child(NodeId parent, Token token) const {
  for (NodeId c : children(parent)) {
    if (node(c).token == token) return c;
  }
  return std::nullopt;
}

std::vector<Token> TokenTree::path_tokens(NodeId id) const {
  std::vector<Token> path;
  for (NodeId cur = id; cur != kRootParent; cur = node(cur).parent) path.push_back(node(cur).token);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<Token>> TokenTree::leaf_paths() const {
  std::vector<std::vector<Token>> out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const auto& kids = children(id);
    if (kids.empty()) {
      out.push_back(path_tokens(id));
      continue;
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::int32_t TokenTree::max_depth() const {
  std::int32_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

bool is_structural(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDuplicateSiblingToken:
    case ViolationKind::kTokenOutOfRange:
    case ViolationKind::kBadDraftProb:
      return false;
    default:
      return true;
  }
}

std::vector<Violation> validate_tree(const TokenTree& tree, std::optional<std::size_t> vocab_size) {
  std::vector<Violation> out;
  const auto& nodes = tree.nodes();
  const auto n = static_cast<NodeId>(nodes.size());
  if (n == 0) {
    out.push_back({kRootParent, ViolationKind::kEmptyTree, "tree has no nodes"});
    return out;
  }
  auto add = [&](NodeId i, ViolationKind k, std::string msg) {
    out.push_back({i, k, std::move(msg) + " at node " + std::to_string(i)});
  };

  if (nodes[0].parent != kRootParent) add(0, ViolationKind::kRootHasParent, "root has a parent");

  // Walk each node's ancestor chain. A chain that fails to reach node 0 within
  // n steps is cyclic or dangling.
  for (NodeId i = 0; i < n; ++i) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
    if (i > 0 && nd.parent == kRootParent) {
      add(i, ViolationKind::kMultipleRoots, "second root");
      continue;
    }
    if (i == 0) continue;
    if (nd.parent == i) {
      add(i, ViolationKind::kCycle, "cycle");
      continue;
    }
    if (nd.parent < 0 || nd.parent >= n) {
      add(i, ViolationKind::kParentOutOfRange, "parent out of range");
      continue;
    }
    if (nd.parent > i) add(i, ViolationKind::kParentAfterChild, "parent index follows child");

    NodeId cur = i;
    std::int32_t steps = 0;
    bool reached_root = false;
    bool on_cycle = false;
    while (steps <= n) {
      const NodeId p = nodes[static_cast<std::size_t>(cur)].parent;
      if (cur == 0) {
        reached_root = true;
        break;
      }
      if (p < 0 || p >= n) break;
      cur = p;
      ++steps;
      if (cur == i) {
        on_cycle = true;
        break;
      }
    }
    if (on_cycle) {
      add(i, ViolationKind::kCycle, "cycle");
    } else if (!reached_root) {
      add(i, ViolationKind::kUnreachable, "unreachable from root");
    } else if (nd.depth != nodes[static_cast<std::size_t>(nd.parent)].depth + 1) {
      add(i, ViolationKind::kDepthMismatch, "depth is not parent depth + 1");
    }
  }
  if (nodes[0].depth != 0) add(0, ViolationKind::kDepthMismatch, "root depth is not 0");

  for (NodeId i = 0; i < n; ++i) {
    std::set<Token> seen;
    for (NodeId c : tree.children(i)) {
      if (!seen.insert(nodes[static_cast<std::size_t>(c)].token).second) {
        add(c, ViolationKind::kDuplicateSiblingToken, "duplicate sibling token");
      }
    }
  }

  for (NodeId i = 0; i < n; ++i) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
    if (vocab_size && (nd.token < 0 || static_cast<std::size_t>(nd.token) >= *vocab_size)) {
      add(i, ViolationKind::kTokenOutOfRange, "token outside vocabulary");
    }
    if (nd.draft_prob && !(*nd.draft_prob > 0.0 && *nd.draft_prob <= 1.0)) {
      add(i, ViolationKind::kBadDraftProb, "draft probability outside (0, 1]");
    }
  }
  return out;
}

std::size_t AncestorMask::row_count(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < n_; ++j) c += bits_[i * n_ + j];
  return c;
}

FlatTree flatten_level_order(const TokenTree& tree, std::int64_t base_position) {
  for (const auto& v : validate_tree(tree)) {
    if (is_structural(v.kind)) throw MalformedTree(v.message);
  }

  const std::size_t n = tree.size();
  FlatTree flat;
  flat.tokens.reserve(n);
  flat.positions.reserve(n);
  flat.node_of.reserve(n);
  flat.parent.reserve(n);
  flat.mask = AncestorMask(n);

  struct Pending {
    std::int32_t parent_flat;
    Token token;
    std::size_t child_rank;
    NodeId id;
  };

  flat.node_of.push_back(0);
  flat.parent.push_back(-1);
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  while (level_begin < level_end) {
    std::vector<Pending> next;
    for (std::size_t f = level_begin; f < level_end; ++f) {
      const auto& kids = tree.children(flat.node_of[f]);
      for (std::size_t r = 0; r < kids.size(); ++r) {
        next.push_back({static_cast<std::int32_t>(f), tree.node(kids[r]).token, r, kids[r]});
      }
    }
    std::stable_sort(next.begin(), next.end(), [](const Pending& a, const Pending& b) {
      if (a.parent_flat != b.parent_flat) return a.parent_flat < b.parent_flat;
      if (a.token != b.token) return a.token < b.token;
      return a.child_rank < b.child_rank;
    });
    for (const auto& p : next) {
      flat.node_of.push_back(p.id);
      flat.parent.push_back(p.parent_flat);
    }
    level_begin = level_end;
    level_end = flat.node_of.size();
  }
  if (flat.node_of.size() != n) throw MalformedTree("level-order traversal did not visit every node");

  for (std::size_t i = 0; i < n; ++i) {
    const TreeNode& nd = tree.node(flat.node_of[i]);
    flat.tokens.push_back(nd.token);
    flat.positions.push_back(base_position + nd.depth);
    if (flat.parent[i] >= 0) {
      const auto p = static_cast<std::size_t>(flat.parent[i]);
      for (std::size_t j = 0; j <= p; ++j) {
        if (flat.mask(p, j)) flat.mask.set(i, j);
      }
    }
    flat.mask.set(i, i);
  }
  return flat;
}

}  // namespace rasd
