// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "outcome_enumeration.hpp"
#include "properties.hpp"
#include "rasd/datastore.hpp"
#include "rasd/engine.hpp"
#include "rasd/harness/bench.hpp"
#include "rasd/harness/synth.hpp"

namespace {

using namespace rasd;
using namespace rasd::harness;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Shared desk-scale setup: one repetitive synthetic corpus, models trained
/// on all but the held-out tail, an in-domain store, and seeded prompts.
struct Fixture {
  Corpus corpus;
  Corpus train;
  Corpus held_out;
  MarkovModel target{3, 32, 0.05};
  MarkovModel draft{1, 32, 0.05};
  Datastore store{{{0}}, 1, 4};

  explicit Fixture(double repetition_rate = 0.5) {
    SyntheticCorpusSpec cs;
    cs.repetition_rate = repetition_rate;
    corpus = synthesize_corpus(cs);
    const std::size_t cut = corpus.size() - std::max<std::size_t>(1, corpus.size() / 10);
    train.assign(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(cut));
    held_out.assign(corpus.begin() + static_cast<std::ptrdiff_t>(cut), corpus.end());
    target = train_markov(train, 3, 0.05, cs.vocab_size);
    draft = train_markov(train, 1, 0.05, cs.vocab_size);
    store = build_datastore(corpus, RetrievalConfig{}, cs.vocab_size);
  }

  std::vector<std::vector<Token>> prompts(std::size_t count, std::size_t len, std::uint64_t seed) const {
    testgen::Gen g(seed);
    std::vector<std::vector<Token>> out;
    while (out.size() < count) {
      const auto& s = held_out[g.below(held_out.size())];
      if (s.size() < len + 1) continue;
      const std::size_t at = g.below(s.size() - len);
      out.emplace_back(s.begin() + static_cast<std::ptrdiff_t>(at), s.begin() + static_cast<std::ptrdiff_t>(at + len));
    }
    return out;
  }
};

BenchSpec bench_spec(const Corpus& corpus, RetrievalMode mode) {
  BenchSpec b;
  b.corpus = corpus;
  b.seeds = {1, 2, 3, 4, 5};
  b.engine.retrieval_mode = mode;
  return b;
}

Verdict greedy_losslessness() {
  const Fixture fx;
  const auto prompts = fx.prompts(100, 32, 11);
  EngineConfig cfg;
  cfg.max_new_tokens = 128;
  std::vector<std::vector<Token>> baseline;
  for (const auto& p : prompts) baseline.push_back(autoregressive_baseline(fx.target, p, cfg).tokens);
  std::size_t runs = 0, mismatches = 0;
  for (auto mode : {RetrievalMode::kNone, RetrievalMode::kPld, RetrievalMode::kRest}) {
    for (bool prune : {true, false}) {
      for (bool fuse : {true, false}) {
        cfg.retrieval_mode = mode;
        cfg.prune.enabled = prune;
        cfg.fusion_enabled = fuse;
        for (std::size_t i = 0; i < prompts.size(); ++i) {
          const auto r = decode(fx.target, fx.draft, &fx.store, prompts[i], cfg);
          ++runs;
          mismatches += (r.tokens != baseline[i] || r.tokens.size() != 128) ? 1 : 0;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(runs) + " runs (100 prompts x 12 configs x 128 tokens), " +
                               std::to_string(mismatches) + " mismatches"};
}

Verdict exact_enumeration() {
  std::size_t instances = 0;
  double worst_first = 0.0, worst_joint = 0.0, worst_conditional_rule = 0.0;
  std::size_t mixed = 0;
  for (std::uint64_t s = 0; instances < 200; ++s) {
    testgen::Gen g(s + 500);
    const std::size_t v = g.between(2, 8);
    const MarkovModel target = g.markov(v, g.between(1, 2), 40);
    const MarkovModel draft = g.markov(v, g.between(0, 1), 40);
    const GenerationState st{g.tokens(g.between(1, 4), v)};
    const Token y0 = g.token(v);
    const double temperature = g.coin() ? 1.0 : 0.6;
    auto [fused, dr] = testgen::mixed_fused_tree(g, draft, st, y0, 12);
    bool has_d = false, has_r = false;
    for (const auto& nd : fused.tree.nodes()) {
      has_d = has_d || nd.provenance != Provenance::kRetrieval;
      has_r = has_r || nd.provenance == Provenance::kRetrieval;
    }
    mixed += has_d && has_r ? 1 : 0;
    const auto out = oracle::enumerate_outcome_distribution(target, st.context, fused, 2, AcceptanceRule::kPointMass,
                                                            temperature);
    std::vector<Token> base = st.context;
    base.push_back(y0);
    const auto chain = oracle::target_chain(target, base, 2, temperature);
    worst_joint = std::max(worst_joint, oracle::max_abs_difference(out, chain));
    worst_first = std::max(worst_first, oracle::max_abs_difference(oracle::marginal(out, 1), oracle::marginal(chain, 1)));
    try {
      const auto biased = oracle::enumerate_outcome_distribution(target, st.context, fused, 2,
                                                                 AcceptanceRule::kDraftConditional, temperature);
      worst_conditional_rule = std::max(worst_conditional_rule, oracle::max_abs_difference(biased, chain));
    } catch (const InvariantBreach&) {
      worst_conditional_rule = 1.0;
    }
    ++instances;
  }
  const bool pass = worst_first <= 1e-12 && worst_joint <= 1e-12 && mixed >= 50;
  return {pass, std::to_string(instances) + " instances (" + std::to_string(mixed) +
                    " mixed draft/retrieval), max |first-token diff| " + fmt("%.2e", worst_first) +
                    ", max |two-token joint diff| " + fmt("%.2e", worst_joint) +
                    "; draft-conditional scoring for comparison: " + fmt("%.3f", worst_conditional_rule)};
}

Verdict statistical_losslessness() {
  SyntheticCorpusSpec cs;
  cs.vocab_size = 16;
  cs.length = 20000;
  const Corpus corpus = synthesize_corpus(cs);
  const MarkovModel target = train_markov(corpus, 3, 0.05, 16);
  const MarkovModel draft = train_markov(corpus, 1, 0.05, 16);
  const Datastore store = build_datastore(corpus, RetrievalConfig{}, 16);
  const std::vector<Token> seq = corpus[3];
  GenerationState st{std::vector<Token>(seq.begin() + 100, seq.begin() + 131)};
  const Token y0 = seq[131];

  // Mirror one engine step with REST retrieval.
  EngineConfig cfg;
  cfg.draft = DraftConfig{4, 4, 4, 20};
  const DraftResult dr = generate_draft_tree(draft, st, y0, cfg.draft);
  const CandidateSet cands = prefix_frequency_filter(rest_retrieve(store, st, y0, cfg.retrieval), 64);
  const TokenTree rt = prune_by_first_token(build_retrieval_tree(cands, y0), dr.first_distribution, cfg.prune);
  const FusedTree fused = fuse_trees(dr, rt);
  const FlatTree flat = flatten_fused(fused, st.base_position());
  const auto dists = to_tree_order(flat, tree_forward(target, st, flat));

  constexpr std::size_t kRuns = 200000;
  std::vector<double> counts(16, 0.0);
  const Rng root(20261014);
  std::size_t accepted_any = 0;
  for (std::size_t i = 0; i < kRuns; ++i) {
    Rng rng = root.split(i);
    const VerifyOutcome o = verify_stochastic(dists, fused, rng);
    accepted_any += o.accepted_count() > 0 ? 1 : 0;
    counts[static_cast<std::size_t>(o.accepted_path.empty() ? o.final_token : o.accepted_path.front())] += 1.0;
  }
  for (auto& c : counts) c /= static_cast<double>(kRuns);
  const double tv = total_variation(counts, dists[0].probs());
  return {tv < 0.02, "200000 runs on a " + std::to_string(fused.size()) + "-node fused tree, TV " + fmt("%.4f", tv) +
                         ", acceptance rate " + fmt("%.3f", static_cast<double>(accepted_any) / kRuns)};
}

Verdict retrieval_equivalence() {
  const auto r = props::retrieval_matches_oracle(10000, 77);
  return {r.ok(), std::to_string(r.cases) + " instances, " + std::to_string(r.failures) + " mismatches" +
                      (r.first_failure.empty() ? "" : " (" + r.first_failure + ")")};
}

Verdict tau_improvement(const Corpus& corpus) {
  std::ostringstream d;
  bool pass = true;
  for (auto mode : {RetrievalMode::kPld, RetrievalMode::kRest}) {
    BenchSpec b = bench_spec(corpus, mode);
    b.arms = {Arm::kDraftOnly, Arm::kRasd};
    const BenchReport r = run_bench(b);
    const double base = r.arm(Arm::kDraftOnly).mean_tau, ours = r.arm(Arm::kRasd).mean_tau;
    pass = pass && ours - base >= 0.1;
    d << "RASD-" << to_string(mode) << " tau " << fmt("%.3f", ours) << " vs draft-only " << fmt("%.3f", base)
      << " (margin " << fmt("%+.3f", ours - base) << "); ";
  }
  d << "5 seeds";
  return {pass, d.str()};
}

Verdict pruning_direction(const Corpus& corpus) {
  BenchSpec b = bench_spec(corpus, RetrievalMode::kRest);
  b.arms = {Arm::kRasd};
  const auto rows = run_ablation(b, SweepAxis::kPrune, {"on", "off"});
  const auto& on = rows[0].report.arm(Arm::kRasd);
  const auto& off = rows[1].report.arm(Arm::kRasd);
  const bool pass = off.mean_tau >= on.mean_tau && off.mean_verified_nodes >= on.mean_verified_nodes;
  auto per_pass = [](const ArmSummary& a) {
    double nodes = 0.0, passes = 0.0;
    for (const auto& r : a.rows) {
      nodes += static_cast<double>(r.metrics.verified_node_total);
      passes += static_cast<double>(r.metrics.target_forward_passes);
    }
    return nodes / passes;
  };
  std::size_t seeds_ok = 0;
  for (std::size_t i = 0; i < on.rows.size(); ++i) {
    seeds_ok += (off.rows[i].metrics.tau >= on.rows[i].metrics.tau &&
                 off.rows[i].metrics.verified_node_total >= on.rows[i].metrics.verified_node_total)
                    ? 1
                    : 0;
  }
  return {pass, "RASD-rest tau off " + fmt("%.3f", off.mean_tau) + " vs on " + fmt("%.3f", on.mean_tau) +
                    ", verified nodes off " + fmt("%.0f", off.mean_verified_nodes) + " vs on " +
                    fmt("%.0f", on.mean_verified_nodes) + " (5-seed means; " + std::to_string(seeds_ok) +
                    "/5 seeds hold individually; per target pass: off " + fmt("%.1f", per_pass(off)) + " vs on " +
                    fmt("%.1f", per_pass(on)) + " nodes)"};
}

Verdict fusion_ablation() {
  const Fixture fx;
  std::size_t prompts_checked = 0, path_mismatch = 0, shared_steps = 0, node_violations = 0, strict = 0;
  for (auto mode : {RetrievalMode::kPld, RetrievalMode::kRest}) {
    EngineConfig cfg;
    cfg.retrieval_mode = mode;
    for (const auto& p : fx.prompts(20, 32, 5)) {
      cfg.fusion_enabled = true;
      const auto on = decode(fx.target, fx.draft, &fx.store, p, cfg, true);
      cfg.fusion_enabled = false;
      const auto off = decode(fx.target, fx.draft, &fx.store, p, cfg, true);
      ++prompts_checked;
      bool same = on.tokens == off.tokens && on.steps.size() == off.steps.size();
      for (std::size_t s = 0; same && s < on.steps.size(); ++s) {
        same = on.steps[s].accepted_path == off.steps[s].accepted_path &&
               on.steps[s].final_token == off.steps[s].final_token;
        if (on.steps[s].shared_prefix) {
          ++shared_steps;
          node_violations += on.steps[s].verified_nodes > off.steps[s].verified_nodes ? 1 : 0;
          strict += on.steps[s].verified_nodes < off.steps[s].verified_nodes ? 1 : 0;
        }
      }
      path_mismatch += same ? 0 : 1;
    }
  }
  return {path_mismatch == 0 && node_violations == 0 && shared_steps > 0,
          std::to_string(prompts_checked) + " prompts (pld, rest): " + std::to_string(path_mismatch) +
              " accepted-path mismatches; " + std::to_string(shared_steps) + " shared-prefix steps, " +
              std::to_string(node_violations) + " with fused > union nodes, " + std::to_string(strict) +
              " strictly smaller"};
}

Verdict cand_len_sweep(const Corpus& corpus) {
  std::ostringstream d;
  bool pass = true;
  for (auto mode : {RetrievalMode::kPld, RetrievalMode::kRest}) {
    BenchSpec b = bench_spec(corpus, mode);
    b.arms = {Arm::kRetrievalOnly};
    const auto rows = run_ablation(b, SweepAxis::kCandLen, {"2", "4", "8"});
    d << "retrieval-only " << to_string(mode) << " tau";
    double prev = 0.0;
    for (const auto& r : rows) {
      const double t = r.report.arm(Arm::kRetrievalOnly).mean_tau;
      pass = pass && t >= prev;
      prev = t;
      d << " l=" << r.value << ":" << fmt("%.3f", t);
    }
    d << "; ";
  }
  d << "5 seeds";
  return {pass, d.str()};
}

Verdict store_size(const Corpus& corpus) {
  BenchSpec b = bench_spec(corpus, RetrievalMode::kRest);
  b.arms = {Arm::kDraftOnly, Arm::kRasd};
  const auto rows = run_ablation(b, SweepAxis::kStoreSize, {"0.1", "1.0"});
  const double small = rows[0].report.arm(Arm::kRasd).mean_tau;
  const double full = rows[1].report.arm(Arm::kRasd).mean_tau;
  const double none = rows[1].report.arm(Arm::kDraftOnly).mean_tau;
  return {full >= small && small >= none, "RASD-rest tau full store " + fmt("%.3f", full) + " >= 10% store " +
                                              fmt("%.3f", small) + " >= no store (draft-only) " + fmt("%.3f", none) +
                                              ", 5 seeds"};
}

Verdict property_suites() {
  std::ostringstream d;
  bool pass = true;
  for (const auto& s : props::structural_suites()) {
    const auto r = s.run(10000, 4242);
    pass = pass && r.ok() && r.cases >= 10000;
    d << s.name << " " << r.cases - r.failures << "/" << r.cases << "; ";
    if (!r.ok()) d << "(" << r.first_failure << ") ";
  }
  return {pass, d.str()};
}

}  // namespace

int main() {
  const Corpus repetitive = [] {
    SyntheticCorpusSpec cs;
    cs.repetition_rate = 0.5;
    return synthesize_corpus(cs);
  }();

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "greedy losslessness", 60, greedy_losslessness},
      {2, "stochastic losslessness (exact enumeration)", 30, exact_enumeration},
      {3, "stochastic losslessness (statistical)", 60, statistical_losslessness},
      {4, "retrieval equivalence", 60, retrieval_equivalence},
      {5, "tau improvement direction", 300, [&] { return tau_improvement(repetitive); }},
      {6, "pruning ablation direction", 300, [&] { return pruning_direction(repetitive); }},
      {7, "fusion ablation", 300, fusion_ablation},
      {8, "candidate-length sweep shape", 300, [&] { return cand_len_sweep(repetitive); }},
      {9, "datastore-size direction", 300, [&] { return store_size(repetitive); }},
      {10, "tree/flatten property suite", 120, property_suites},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = v.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s: %s (%.1f s of %.0f s budget%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
