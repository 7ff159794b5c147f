// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/draft.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "rasd/errors.hpp"

namespace rasd {

void DraftConfig::validate(std::size_t vocab_size) const {
  if (max_depth < 1) throw ConfigInvalid("draft max_depth must be >= 1");
  if (branch_k < 1 || branch_k > vocab_size) throw ConfigInvalid("draft branch_k must be in [1, vocab_size]");
  if (layer_beam < 1) throw ConfigInvalid("draft layer_beam must be >= 1");
  if (total_nodes < 1) throw ConfigInvalid("draft total_nodes must be >= 1");
}

std::vector<Token> top_k_tokens(const Distribution& dist, std::size_t k) {
  if (k < 1 || k > dist.size()) {
    throw BadK("k=" + std::to_string(k) + " outside [1, " + std::to_string(dist.size()) + "]");
  }
  std::vector<Token> ids(dist.size());
  std::iota(ids.begin(), ids.end(), Token{0});
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](Token a, Token b) { return dist[a] != dist[b] ? dist[a] > dist[b] : a < b; });
  ids.resize(k);
  return ids;
}

namespace {

struct Candidate {
  std::size_t parent;  // index into `all`, or npos for children of the root
  Token token;
  double prob;
  double cumulative;
  std::size_t depth;
};

constexpr std::size_t kRootSlot = static_cast<std::size_t>(-1);

// cumulative desc, then depth asc, then token asc; generation index settles
// the remaining ties so the order is total.
bool ranks_before(const Candidate& a, std::size_t ia, const Candidate& b, std::size_t ib) {
  if (a.cumulative != b.cumulative) return a.cumulative > b.cumulative;
  if (a.depth != b.depth) return a.depth < b.depth;
  if (a.token != b.token) return a.token < b.token;
  return ia < ib;
}

}  // namespace

DraftResult generate_draft_tree(const LanguageModel& draft_model, const GenerationState& state, Token y0,
                                const DraftConfig& cfg) {
  cfg.validate(draft_model.vocab_size());
  if (y0 < 0 || static_cast<std::size_t>(y0) >= draft_model.vocab_size()) {
    throw std::out_of_range("generate_draft_tree: y0 outside vocabulary");
  }

  const std::size_t keep = std::min(draft_model.context_window(), state.context.size());
  std::vector<Token> base(state.context.end() - static_cast<std::ptrdiff_t>(keep), state.context.end());
  base.push_back(y0);

  std::vector<Candidate> all;
  std::vector<Distribution> expansion_dists;       // parallel to `expanded`
  std::vector<std::size_t> expanded;               // slots whose children were generated
  std::vector<Token> path;

  auto context_for = [&](std::size_t slot) {
    path.clear();
    for (std::size_t s = slot; s != kRootSlot; s = all[s].parent) path.push_back(all[s].token);
    std::vector<Token> ctx = base;
    ctx.insert(ctx.end(), path.rbegin(), path.rend());
    return ctx;
  };

  DraftResult result;
  result.first_distribution = draft_model.next_distribution(base);

  std::vector<std::size_t> frontier{kRootSlot};
  for (std::size_t depth = 1; depth <= cfg.max_depth && !frontier.empty(); ++depth) {
    ++result.forward_passes;
    const std::size_t layer_begin = all.size();
    for (std::size_t slot : frontier) {
      Distribution dist = slot == kRootSlot ? result.first_distribution : draft_model.next_distribution(context_for(slot));
      const double parent_cum = slot == kRootSlot ? 1.0 : all[slot].cumulative;
      for (Token t : top_k_tokens(dist, cfg.branch_k)) {
        all.push_back(Candidate{slot, t, dist[t], parent_cum * dist[t], depth});
      }
      expanded.push_back(slot);
      expansion_dists.push_back(std::move(dist));
    }
    std::vector<std::size_t> layer(all.size() - layer_begin);
    std::iota(layer.begin(), layer.end(), layer_begin);
    std::stable_sort(layer.begin(), layer.end(),
                     [&](std::size_t a, std::size_t b) { return ranks_before(all[a], a, all[b], b); });
    if (layer.size() > cfg.layer_beam) layer.resize(cfg.layer_beam);
    frontier = std::move(layer);
  }

  // Global rerank, then close under ancestors.
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ranks_before(all[a], a, all[b], b); });
  if (order.size() > cfg.total_nodes) order.resize(cfg.total_nodes);
  std::vector<bool> selected(all.size(), false);
  for (std::size_t s : order) {
    for (std::size_t cur = s; cur != kRootSlot && !selected[cur]; cur = all[cur].parent) selected[cur] = true;
  }

  // Emit in generation order so parents precede children and siblings keep
  // their top-k order.
  result.tree = TokenTree(y0, Provenance::kDraft);
  result.cumulative.assign(1, 1.0);
  std::vector<NodeId> node_of(all.size(), kRootParent);
  for (std::size_t s = 0; s < all.size(); ++s) {
    if (!selected[s]) continue;
    const NodeId parent = all[s].parent == kRootSlot ? 0 : node_of[all[s].parent];
    node_of[s] = result.tree.add_child(parent, all[s].token, all[s].prob, Provenance::kDraft);
    result.cumulative.push_back(all[s].cumulative);
  }
  result.conditionals.assign(result.tree.size(), std::nullopt);
  for (std::size_t e = 0; e < expanded.size(); ++e) {
    const std::size_t slot = expanded[e];
    const NodeId id = slot == kRootSlot ? 0 : node_of[slot];
    if (id != kRootParent) result.conditionals[static_cast<std::size_t>(id)] = expansion_dists[e];
  }
  return result;
}

}  // namespace rasd
