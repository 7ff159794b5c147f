// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rasd/datastore.hpp"
#include "rasd/draft.hpp"
#include "rasd/fusion.hpp"
#include "rasd/models.hpp"
#include "rasd/retrieval_tree.hpp"
#include "rasd/verify.hpp"

namespace rasd {

enum class RetrievalMode { kNone, kPld, kRest, kBoth };

const char* to_string(RetrievalMode mode);
RetrievalMode parse_retrieval_mode(const std::string& s);

/// Cost of each event in units of one target forward pass.
struct CostModel {
  double c_target = 1.0;
  double c_draft = 0.05;
  double c_retrieval = 0.02;
  bool wall_clock = false;
};

struct EngineConfig {
  DraftConfig draft;
  bool use_draft = true;  // false drafts nothing but y0 (retrieval-only arm)
  RetrievalConfig retrieval;
  PruneConfig prune;
  bool fusion_enabled = true;
  FusionOptions fusion;
  RetrievalMode retrieval_mode = RetrievalMode::kNone;
  SamplerConfig sampler;
  AcceptanceRule acceptance = AcceptanceRule::kPointMass;
  std::size_t max_new_tokens = 128;
  std::optional<Token> eos_token;
  std::size_t retrieval_node_budget = 64;
  CostModel cost;

  /// Throws ConfigInvalid.
  void validate(std::size_t vocab_size, bool has_store) const;
};

struct Metrics {
  std::uint64_t target_forward_passes = 0;
  std::uint64_t draft_forward_passes = 0;
  std::uint64_t retrieval_calls = 0;
  std::uint64_t tokens_generated = 0;
  std::uint64_t verified_node_total = 0;
  double tau = 0.0;
  double sr_proxy = 0.0;
  std::vector<std::size_t> per_step_accepts;  // entry 0 is the y0 pass
  double elapsed_seconds = 0.0;
};

/// Per verification step bookkeeping, recorded on request.
struct StepTrace {
  std::size_t draft_nodes = 0;
  std::size_t retrieval_nodes = 0;
  std::size_t verified_nodes = 0;
  bool shared_prefix = false;  // some depth-1 token is in both trees
  std::vector<Token> accepted_path;
  Token final_token = 0;
};

struct DecodeResult {
  std::vector<Token> tokens;
  Metrics metrics;
  std::vector<StepTrace> steps;
};

/// Full loop: y0 from the target, then per step draft -> retrieve -> build,
/// filter and prune the retrieval tree -> fuse -> one tree forward -> verify
/// -> append. Stops at eos or max_new_tokens.
DecodeResult decode(const LanguageModel& target, const LanguageModel& draft_model, const Datastore* store,
                    std::span<const Token> prompt, const EngineConfig& cfg, bool record_steps = false);

/// One target pass per token with the same sampler and rng discipline.
DecodeResult autoregressive_baseline(const LanguageModel& target, std::span<const Token> prompt,
                                     const EngineConfig& cfg);

/// tokens * c_target / (target passes * c_target + draft passes * c_draft +
/// retrieval calls * c_retrieval).
double speedup_proxy(const Metrics& m, const CostModel& cost);

/// Elapsed-time ratio baseline / run.
double wall_clock_speedup(const Metrics& run, const Metrics& baseline);

/// JSON object with the Metrics field names.
std::string metrics_to_json(const Metrics& m);

}  // namespace rasd
