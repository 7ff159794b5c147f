// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "rasd/datastore.hpp"
#include "rasd/draft.hpp"
#include "rasd/engine.hpp"
#include "rasd/fusion.hpp"
#include "rasd/harness/synth.hpp"
#include "rasd/retrieval_tree.hpp"

namespace {

using namespace rasd;

struct World {
  harness::Corpus corpus;
  MarkovModel target{3, 32, 0.05};
  MarkovModel draft{1, 32, 0.05};
  Datastore store{{{0}}, 1, 4};
  std::vector<Token> prompt;

  World() {
    corpus = harness::synthesize_corpus(harness::SyntheticCorpusSpec{});
    target = train_markov(corpus, 3, 0.05, 32);
    draft = train_markov(corpus, 1, 0.05, 32);
    store = build_datastore(corpus, RetrievalConfig{}, 32);
    prompt.assign(corpus.back().begin(), corpus.back().begin() + 32);
  }
};

const World& world() {
  static const World w;
  return w;
}

void BM_RetrieveSuffixMatch(benchmark::State& state) {
  const World& w = world();
  RetrievalConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(retrieve_suffix_match(w.store, w.prompt, cfg));
}
BENCHMARK(BM_RetrieveSuffixMatch);

void BM_DraftTree(benchmark::State& state) {
  const World& w = world();
  GenerationState st{w.prompt};
  DraftConfig cfg;
  cfg.total_nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_draft_tree(w.draft, st, 0, cfg));
}
BENCHMARK(BM_DraftTree)->Arg(10)->Arg(60);

void BM_FuseAndTreeForward(benchmark::State& state) {
  const World& w = world();
  GenerationState st{w.prompt};
  const Token y0 = w.corpus.back()[32];
  const DraftResult d = generate_draft_tree(w.draft, st, y0, DraftConfig{});
  const TokenTree r = build_retrieval_tree(rest_retrieve(w.store, st, y0, RetrievalConfig{}), y0);
  for (auto _ : state) {
    const FusedTree f = fuse_trees(d, r);
    const FlatTree flat = flatten_fused(f, st.base_position());
    benchmark::DoNotOptimize(tree_forward(w.target, st, flat));
  }
}
BENCHMARK(BM_FuseAndTreeForward);

void BM_Decode(benchmark::State& state) {
  const World& w = world();
  EngineConfig cfg;
  cfg.retrieval_mode = static_cast<RetrievalMode>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decode(w.target, w.draft, &w.store, w.prompt, cfg));
  state.SetLabel(to_string(cfg.retrieval_mode));
}
BENCHMARK(BM_Decode)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Baseline(benchmark::State& state) {
  const World& w = world();
  EngineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(autoregressive_baseline(w.target, w.prompt, cfg));
}
BENCHMARK(BM_Baseline)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
