// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

// rasd: corpus synthesis, datastore building, and benchmark/ablation runs.
//
// Exit codes: 0 success, 1 validation or I/O failure, 2 internal invariant
// breach.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rasd/datastore.hpp"
#include "rasd/errors.hpp"
#include "rasd/harness/bench.hpp"
#include "rasd/harness/corpus_io.hpp"
#include "rasd/harness/synth.hpp"

namespace {

using namespace rasd;
using namespace rasd::harness;

struct CorpusFlags {
  std::string path;
  bool text = false;
};

struct RunFlags {
  CorpusFlags corpus;
  std::string store_path;
  std::string report_path;
  std::string retrieval_mode = "pld";
  std::string domain = "in";
  std::vector<std::string> arms{"baseline", "draft-only", "retrieval-only", "rasd"};
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed = 1;
  BenchSpec spec;
};

Corpus load_corpus(const CorpusFlags& f) { return f.text ? read_text_corpus(f.path) : read_corpus(f.path); }

void add_retrieval_flags(CLI::App* cmd, RetrievalConfig& r) {
  cmd->add_option("--n-max", r.n_max, "Longest suffix tried")->capture_default_str();
  cmd->add_option("--n-min", r.n_min, "Shortest suffix tried")->capture_default_str();
  cmd->add_option("--num-candidates", r.num_candidates, "Candidates kept per retrieval")->capture_default_str();
  cmd->add_option("--cand-len", r.cand_len, "Tokens per candidate")->capture_default_str();
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  EngineConfig& e = f.spec.engine;
  cmd->add_option("--corpus", f.corpus.path, "Token-id corpus")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--text", f.corpus.text, "Treat --corpus as UTF-8 text (byte vocabulary)");
  cmd->add_option("--store", f.store_path, "Prebuilt datastore (default: built from the corpus)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Single seed")->capture_default_str();
  cmd->add_option("--seeds", f.seeds, "Seed list (overrides --seed)");
  cmd->add_option("--temperature", e.sampler.temperature, "0 is greedy")->capture_default_str();
  cmd->add_option("--max-new-tokens", f.spec.gen_len, "Tokens generated per prompt")->capture_default_str();
  cmd->add_option("--retrieval-mode", f.retrieval_mode, "none, pld, rest, or both")
      ->check(CLI::IsMember({"none", "pld", "rest", "both"}))
      ->capture_default_str();
  cmd->add_flag("--prune,!--no-prune", e.prune.enabled, "Prune retrieval candidates by P1 top-k");
  cmd->add_option("--prune-k", e.prune.top_k, "k for first-token pruning")->capture_default_str();
  cmd->add_flag("--fuse,!--no-fuse", e.fusion_enabled, "Merge draft and retrieval trees");
  add_retrieval_flags(cmd, e.retrieval);
  cmd->add_option("--pld-retry-depth", e.retrieval.pld_retry_depth)->capture_default_str();
  cmd->add_option("--pld-retry-k", e.retrieval.pld_retry_k)->capture_default_str();
  cmd->add_option("--retrieval-budget", e.retrieval_node_budget, "Node budget of the REST retrieval tree")
      ->capture_default_str();
  cmd->add_option("--draft-depth", e.draft.max_depth)->capture_default_str();
  cmd->add_option("--draft-branch", e.draft.branch_k)->capture_default_str();
  cmd->add_option("--draft-beam", e.draft.layer_beam)->capture_default_str();
  cmd->add_option("--draft-total", e.draft.total_nodes)->capture_default_str();
  cmd->add_option("--report", f.report_path, "Write the JSON report here (default: stdout)");
  cmd->add_option("--prompts", f.spec.prompt_count, "Prompts per seed")->capture_default_str();
  cmd->add_option("--prompt-len", f.spec.prompt_len)->capture_default_str();
  cmd->add_option("--arms", f.arms, "baseline, draft-only, retrieval-only, rasd")->capture_default_str();
  cmd->add_option("--target-order", f.spec.target_order)->capture_default_str();
  cmd->add_option("--target-alpha", f.spec.target_alpha)->capture_default_str();
  cmd->add_option("--draft-order", f.spec.draft_order)->capture_default_str();
  cmd->add_option("--draft-alpha", f.spec.draft_alpha)->capture_default_str();
  cmd->add_option("--domain", f.domain, "in: prompts' source sequences are indexed; out: they are not")
      ->check(CLI::IsMember({"in", "out"}))
      ->capture_default_str();
  cmd->add_option("--c-draft", f.spec.cost.c_draft, "Draft pass cost relative to a target pass")
      ->capture_default_str();
  cmd->add_option("--c-retrieval", f.spec.cost.c_retrieval, "Retrieval cost relative to a target pass")
      ->capture_default_str();
  cmd->add_flag("--wall-clock", f.spec.cost.wall_clock, "Also report elapsed-time speedup vs baseline");
}

BenchSpec finish_spec(RunFlags& f) {
  BenchSpec spec = f.spec;
  spec.corpus = load_corpus(f.corpus);
  spec.engine.retrieval_mode = parse_retrieval_mode(f.retrieval_mode);
  spec.in_domain = f.domain == "in";
  spec.seeds = f.seeds.empty() ? std::vector<std::uint64_t>{f.seed} : f.seeds;
  spec.arms.clear();
  for (const auto& a : f.arms) spec.arms.push_back(parse_arm(a));
  if (!f.store_path.empty()) spec.store = load_datastore(std::filesystem::path(f.store_path), spec.engine.retrieval);
  return spec;
}

void emit_report(const std::string& path, const std::string& json) {
  if (path.empty()) {
    std::cout << json;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open report " + path);
  out << json;
  if (!out) throw IoFailure("write failed for " + path);
}

int run(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented speculative decoding benchmark harness"};
  app.require_subcommand(1);

  SyntheticCorpusSpec synth_spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic token corpus");
  synth->add_option("--vocab", synth_spec.vocab_size)->capture_default_str();
  synth->add_option("--source-order", synth_spec.source_order)->capture_default_str();
  synth->add_option("--length", synth_spec.length, "Total tokens")->capture_default_str();
  synth->add_option("--seq-len", synth_spec.sequence_length, "Tokens per line")->capture_default_str();
  synth->add_option("--repetition-rate", synth_spec.repetition_rate)->capture_default_str();
  synth->add_option("--peakedness", synth_spec.peakedness)->capture_default_str();
  synth->add_option("--seed", synth_spec.seed)->capture_default_str();
  synth->add_option("--out,--corpus", synth_out, "Output corpus path")->required();

  CorpusFlags build_corpus;
  RetrievalConfig build_cfg;
  std::string build_store;
  std::size_t build_vocab = 0;
  auto* build = app.add_subcommand("build", "Build a datastore file from a corpus");
  build->add_option("--corpus", build_corpus.path)->required()->check(CLI::ExistingFile);
  build->add_flag("--text", build_corpus.text, "Treat --corpus as UTF-8 text (byte vocabulary)");
  build->add_option("--store", build_store, "Output datastore path")->required();
  build->add_option("--vocab", build_vocab, "Vocabulary size (default: max id + 1)");
  add_retrieval_flags(build, build_cfg);

  RunFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Decode held-out prompts with each arm and report tau/SR");
  add_run_flags(bench, bench_flags);

  RunFlags ablate_flags;
  std::string sweep;
  std::vector<std::string> values;
  auto* ablate = app.add_subcommand("ablate", "Sweep one axis: prune, fusion, cand-len, store-size");
  add_run_flags(ablate, ablate_flags);
  ablate->add_option("--sweep", sweep)->required()->check(
      CLI::IsMember({"prune", "fusion", "cand-len", "cand_len", "store-size", "store_size"}));
  ablate->add_option("--values", values, "Values for the swept axis")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*synth) {
    const Corpus corpus = synthesize_corpus(synth_spec);
    write_corpus(std::filesystem::path(synth_out), corpus);
    std::cout << "sequences=" << corpus.size() << " tokens=" << synth_spec.length << "\n";
  } else if (*build) {
    const Corpus corpus = load_corpus(build_corpus);
    const Datastore store = build_datastore(corpus, build_cfg, build_vocab);
    save_datastore(store, std::filesystem::path(build_store));
    std::cout << "store_bytes=" << std::filesystem::file_size(build_store) << " keys=" << store.key_count() << "\n";
  } else if (*bench) {
    const BenchSpec spec = finish_spec(bench_flags);
    const BenchReport report = run_bench(spec);
    emit_report(bench_flags.report_path, bench_report_json(spec, report));
    std::cerr << bench_summary_table(report);
  } else if (*ablate) {
    const BenchSpec spec = finish_spec(ablate_flags);
    const auto rows = run_ablation(spec, parse_sweep_axis(sweep), values);
    emit_report(ablate_flags.report_path, ablation_report_json(spec, rows));
    std::cerr << ablation_summary_table(rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rasd::InvariantBreach& e) {
    std::cerr << "internal invariant breach: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
