// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/engine.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <json.hpp>

#include "rasd/errors.hpp"

namespace rasd {

const char* to_string(RetrievalMode mode) {
  switch (mode) {
    case RetrievalMode::kNone: return "none";
    case RetrievalMode::kPld: return "pld";
    case RetrievalMode::kRest: return "rest";
    case RetrievalMode::kBoth: return "both";
  }
  return "unknown";
}

RetrievalMode parse_retrieval_mode(const std::string& s) {
  if (s == "none") return RetrievalMode::kNone;
  if (s == "pld") return RetrievalMode::kPld;
  if (s == "rest") return RetrievalMode::kRest;
  if (s == "both") return RetrievalMode::kBoth;
  throw ConfigInvalid("unknown retrieval mode '" + s + "'");
}

namespace {

bool uses_rest(RetrievalMode m) { return m == RetrievalMode::kRest || m == RetrievalMode::kBoth; }
bool uses_pld(RetrievalMode m) { return m == RetrievalMode::kPld || m == RetrievalMode::kBoth; }

std::span<const Token> tail(std::span<const Token> ctx, std::size_t window) {
  return ctx.subspan(ctx.size() - std::min(window, ctx.size()));
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Emits accepted tokens into the output until the budget or eos is hit.
struct Emitter {
  const EngineConfig& cfg;
  std::vector<Token>& committed;
  std::vector<Token>& output;
  bool done = false;

  void emit(Token t) {
    if (done) return;
    committed.push_back(t);
    output.push_back(t);
    if (output.size() >= cfg.max_new_tokens || (cfg.eos_token && t == *cfg.eos_token)) done = true;
  }
};

void finalize(Metrics& m, const CostModel& cost, const Clock& clock, std::size_t tokens) {
  m.tokens_generated = tokens;
  m.tau = m.target_forward_passes == 0 ? 0.0
                                       : static_cast<double>(m.tokens_generated) /
                                             static_cast<double>(m.target_forward_passes);
  m.sr_proxy = speedup_proxy(m, cost);
  m.elapsed_seconds = clock.seconds();
}

}  // namespace

void EngineConfig::validate(std::size_t vocab_size, bool has_store) const {
  if (max_new_tokens < 1) throw ConfigInvalid("max_new_tokens must be >= 1");
  if (sampler.temperature < 0.0) throw ConfigInvalid("temperature must be >= 0");
  if (use_draft) draft.validate(vocab_size);
  if (retrieval_mode != RetrievalMode::kNone) retrieval.validate();
  if (prune.enabled) {
    if (!use_draft) throw ConfigInvalid("pruning needs the draft distribution; enable drafting or disable pruning");
    if (prune.top_k < 1 || prune.top_k > vocab_size) throw ConfigInvalid("prune top_k must be in [1, vocab_size]");
  }
  if (uses_rest(retrieval_mode) && !has_store) throw ConfigInvalid("REST retrieval requires a datastore");
  if (retrieval_node_budget < 1) throw ConfigInvalid("retrieval_node_budget must be >= 1");
  if (!(cost.c_target > 0.0) || cost.c_draft < 0.0 || cost.c_retrieval < 0.0) {
    throw ConfigInvalid("costs must be non-negative with c_target > 0");
  }
  if (eos_token && (*eos_token < 0 || static_cast<std::size_t>(*eos_token) >= vocab_size)) {
    throw ConfigInvalid("eos token outside vocabulary");
  }
}

DecodeResult decode(const LanguageModel& target, const LanguageModel& draft_model, const Datastore* store,
                    std::span<const Token> prompt, const EngineConfig& cfg, bool record_steps) {
  const std::size_t vocab = target.vocab_size();
  if (draft_model.vocab_size() != vocab) throw ConfigInvalid("target and draft vocabularies differ");
  if (prompt.empty()) throw ConfigInvalid("prompt must be non-empty");
  for (Token t : prompt) {
    if (t < 0 || static_cast<std::size_t>(t) >= vocab) throw ConfigInvalid("prompt token outside vocabulary");
  }
  cfg.validate(vocab, store != nullptr);

  const Clock clock;
  const double temperature = cfg.sampler.temperature;
  const bool greedy = temperature <= 0.0;
  Rng rng(cfg.sampler.seed);
  ForwardPassCounter target_passes;

  DecodeResult result;
  Metrics& m = result.metrics;
  std::vector<Token> committed(prompt.begin(), prompt.end());
  Emitter out{cfg, committed, result.tokens};

  // y0 for the first step costs one target pass.
  {
    const Distribution p0 = target.next_distribution(tail(committed, target.context_window()));
    ++target_passes.passes;
    const Token y0 = greedy ? argmax(p0) : sample_from(apply_temperature(p0, temperature), rng.uniform());
    out.emit(y0);
    m.per_step_accepts.push_back(0);
  }

  GenerationState state;
  while (!out.done) {
    const Token y0 = committed.back();
    state.context.assign(committed.begin(), committed.end() - 1);

    DraftResult dr;
    if (cfg.use_draft) {
      dr = generate_draft_tree(draft_model, state, y0, cfg.draft);
    } else {
      dr.tree = TokenTree(y0, Provenance::kDraft);
      dr.cumulative.assign(1, 1.0);
      dr.conditionals.assign(1, std::nullopt);
    }
    m.draft_forward_passes += dr.forward_passes;

    CandidateSet candidates;
    if (uses_pld(cfg.retrieval_mode)) {
      candidates = pld_retrieve(state, y0, cfg.use_draft ? &dr : nullptr, cfg.retrieval);
      ++m.retrieval_calls;
    }
    if (uses_rest(cfg.retrieval_mode)) {
      const CandidateSet rest =
          prefix_frequency_filter(rest_retrieve(*store, state, y0, cfg.retrieval), cfg.retrieval_node_budget);
      ++m.retrieval_calls;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        candidates.add(rest.candidates[i], rest.match_len[i], rest.frequency[i]);
      }
    }
    TokenTree retrieval_tree = build_retrieval_tree(candidates, y0);
    if (cfg.prune.enabled) retrieval_tree = prune_by_first_token(retrieval_tree, dr.first_distribution, cfg.prune);

    const FusedTree fused =
        cfg.fusion_enabled ? fuse_trees(dr, retrieval_tree, cfg.fusion) : union_trees(dr, retrieval_tree);
    const FlatTree flat = flatten_fused(fused, state.base_position());
    std::vector<Distribution> dists = to_tree_order(flat, tree_forward(target, state, flat, &target_passes));
    if (!greedy) {
      for (auto& d : dists) d = apply_temperature(d, temperature);
    }
    const VerifyOutcome outcome =
        greedy ? verify_greedy(dists, fused.tree) : verify_stochastic(dists, fused, rng, cfg.acceptance);

    m.verified_node_total += fused.size();
    m.per_step_accepts.push_back(outcome.accepted_count());
    if (record_steps) {
      StepTrace trace;
      trace.draft_nodes = dr.tree.size();
      trace.retrieval_nodes = retrieval_tree.size();
      trace.verified_nodes = fused.size();
      std::set<Token> draft_first;
      for (NodeId c : dr.tree.children(0)) draft_first.insert(dr.tree.node(c).token);
      for (NodeId c : retrieval_tree.children(0)) {
        trace.shared_prefix = trace.shared_prefix || draft_first.contains(retrieval_tree.node(c).token);
      }
      trace.accepted_path = outcome.accepted_path;
      trace.final_token = outcome.final_token;
      result.steps.push_back(std::move(trace));
    }

    for (Token t : outcome.accepted_path) out.emit(t);
    out.emit(outcome.final_token);
  }

  m.target_forward_passes = target_passes.passes;
  finalize(m, cfg.cost, clock, result.tokens.size());
  return result;
}

DecodeResult autoregressive_baseline(const LanguageModel& target, std::span<const Token> prompt,
                                     const EngineConfig& cfg) {
  if (prompt.empty()) throw ConfigInvalid("prompt must be non-empty");
  if (cfg.max_new_tokens < 1) throw ConfigInvalid("max_new_tokens must be >= 1");
  const Clock clock;
  const double temperature = cfg.sampler.temperature;
  Rng rng(cfg.sampler.seed);

  DecodeResult result;
  std::vector<Token> committed(prompt.begin(), prompt.end());
  Emitter out{cfg, committed, result.tokens};
  while (!out.done) {
    const Distribution p = target.next_distribution(tail(committed, target.context_window()));
    ++result.metrics.target_forward_passes;
    result.metrics.per_step_accepts.push_back(0);
    out.emit(temperature <= 0.0 ? argmax(p) : sample_from(apply_temperature(p, temperature), rng.uniform()));
  }
  finalize(result.metrics, cfg.cost, clock, result.tokens.size());
  return result;
}

double speedup_proxy(const Metrics& m, const CostModel& cost) {
  const double denom = static_cast<double>(m.target_forward_passes) * cost.c_target +
                       static_cast<double>(m.draft_forward_passes) * cost.c_draft +
                       static_cast<double>(m.retrieval_calls) * cost.c_retrieval;
  if (denom <= 0.0) return 0.0;
  return static_cast<double>(m.tokens_generated) * cost.c_target / denom;
}

double wall_clock_speedup(const Metrics& run, const Metrics& baseline) {
  if (run.elapsed_seconds <= 0.0) return 0.0;
  return baseline.elapsed_seconds / run.elapsed_seconds;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["target_forward_passes"] = m.target_forward_passes;
  j["draft_forward_passes"] = m.draft_forward_passes;
  j["retrieval_calls"] = m.retrieval_calls;
  j["tokens_generated"] = m.tokens_generated;
  j["verified_node_total"] = m.verified_node_total;
  j["tau"] = m.tau;
  j["sr_proxy"] = m.sr_proxy;
  j["per_step_accepts"] = m.per_step_accepts;
  return j.dump();
}

}  // namespace rasd
