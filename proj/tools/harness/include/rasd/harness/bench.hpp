// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rasd/datastore.hpp"
#include "rasd/engine.hpp"
#include "rasd/harness/corpus_io.hpp"

namespace rasd::harness {

enum class Arm { kBaseline, kDraftOnly, kRetrievalOnly, kRasd };

const char* to_string(Arm arm);
Arm parse_arm(const std::string& s);

struct BenchSpec {
  Corpus corpus;
  std::size_t prompt_count = 20;
  std::size_t prompt_len = 32;
  std::size_t gen_len = 128;
  std::size_t target_order = 3;
  double target_alpha = 0.05;
  std::size_t draft_order = 1;
  double draft_alpha = 0.05;
  EngineConfig engine;  // retrieval_mode is the mode of the retrieval-only and RASD arms
  CostModel cost;
  std::vector<std::uint64_t> seeds{1};
  std::vector<Arm> arms{Arm::kBaseline, Arm::kDraftOnly, Arm::kRetrievalOnly, Arm::kRasd};
  bool in_domain = true;        // held-out prompt sequences are indexed into the store
  double store_fraction = 1.0;  // leading fraction of the store corpus kept
  std::optional<Datastore> store; // prebuilt store; overrides corpus-derived store

  void validate() const;
};

struct ArmRow {
  std::uint64_t seed = 0;
  Metrics metrics;  // aggregated over the seed's prompts
};

struct ArmSummary {
  Arm arm = Arm::kBaseline;
  std::vector<ArmRow> rows;
  double mean_tau = 0.0;
  double std_tau = 0.0;
  double mean_sr = 0.0;
  double std_sr = 0.0;
  double mean_verified_nodes = 0.0;
  std::optional<double> wall_clock_speedup;
};

struct BenchReport {
  std::vector<ArmSummary> arms;
  std::optional<bool> lossless;  // greedy only: every arm reproduced the baseline text
  std::size_t store_sequences = 0;
  std::size_t store_tokens = 0;

  const ArmSummary& arm(Arm a) const;
};

/// Splits the corpus (last 10% of sequences held out for prompts), trains the
/// target and draft tables on the rest, and decodes every prompt with every
/// requested arm for each seed.
BenchReport run_bench(const BenchSpec& spec);

enum class SweepAxis { kPrune, kFusion, kCandLen, kStoreSize };

const char* to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& s);

struct AblationRow {
  SweepAxis axis;
  std::string value;
  BenchReport report;
};

/// Re-runs the bench once per value, changing exactly one axis.
std::vector<AblationRow> run_ablation(const BenchSpec& spec, SweepAxis axis, const std::vector<std::string>& values);

std::string bench_report_json(const BenchSpec& spec, const BenchReport& report);
std::string ablation_report_json(const BenchSpec& spec, const std::vector<AblationRow>& rows);
std::string bench_summary_table(const BenchReport& report);
std::string ablation_summary_table(const std::vector<AblationRow>& rows);

}  // namespace rasd::harness
