// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/harness/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "rasd/errors.hpp"
#include "rasd/models.hpp"
#include "rasd/rng.hpp"

namespace rasd::harness {

const char* to_string(Arm arm) {
  switch (arm) {
    case Arm::kBaseline: return "baseline";
    case Arm::kDraftOnly: return "draft-only";
    case Arm::kRetrievalOnly: return "retrieval-only";
    case Arm::kRasd: return "rasd";
  }
  return "unknown";
}

Arm parse_arm(const std::string& s) {
  if (s == "baseline") return Arm::kBaseline;
  if (s == "draft-only" || s == "draft") return Arm::kDraftOnly;
  if (s == "retrieval-only" || s == "retrieval") return Arm::kRetrievalOnly;
  if (s == "rasd") return Arm::kRasd;
  throw ConfigInvalid("unknown arm '" + s + "'");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPrune: return "prune";
    case SweepAxis::kFusion: return "fusion";
    case SweepAxis::kCandLen: return "cand_len";
    case SweepAxis::kStoreSize: return "store_size";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "prune") return SweepAxis::kPrune;
  if (s == "fusion") return SweepAxis::kFusion;
  if (s == "cand-len" || s == "cand_len") return SweepAxis::kCandLen;
  if (s == "store-size" || s == "store_size") return SweepAxis::kStoreSize;
  throw ConfigInvalid("unknown sweep axis '" + s + "'");
}

void BenchSpec::validate() const {
  if (corpus.empty()) throw EmptyCorpus("bench corpus is empty");
  if (prompt_count < 1 || prompt_len < 1 || gen_len < 1) throw ConfigInvalid("bench counts must be >= 1");
  if (seeds.empty()) throw ConfigInvalid("at least one seed is required");
  if (arms.empty()) throw ConfigInvalid("at least one arm is required");
  if (!(store_fraction > 0.0 && store_fraction <= 1.0)) throw ConfigInvalid("store fraction must be in (0, 1]");
  const bool wants_retrieval = std::find(arms.begin(), arms.end(), Arm::kRetrievalOnly) != arms.end();
  if (wants_retrieval && engine.retrieval_mode == RetrievalMode::kNone) {
    throw ConfigInvalid("the retrieval-only arm needs a retrieval mode");
  }
}

const ArmSummary& BenchReport::arm(Arm a) const {
  for (const auto& s : arms) {
    if (s.arm == a) return s;
  }
  throw ConfigInvalid(std::string("arm not in report: ") + to_string(a));
}

namespace {

struct Split {
  Corpus train;
  Corpus held_out;
};

Split split_corpus(const Corpus& corpus) {
  Split s;
  if (corpus.size() == 1) {
    const auto& seq = corpus.front();
    const std::size_t cut = seq.size() - std::max<std::size_t>(1, seq.size() / 10);
    s.train.emplace_back(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(cut));
    s.held_out.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(cut), seq.end());
    if (s.train.front().empty()) s.train = corpus;
    return s;
  }
  const std::size_t held = std::max<std::size_t>(1, corpus.size() / 10);
  s.train.assign(corpus.begin(), corpus.end() - static_cast<std::ptrdiff_t>(held));
  s.held_out.assign(corpus.end() - static_cast<std::ptrdiff_t>(held), corpus.end());
  return s;
}

Corpus leading_fraction(const Corpus& corpus, double fraction) {
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(corpus.size()) - 1e-9)));
  return Corpus(corpus.begin(), corpus.begin() + static_cast<std::ptrdiff_t>(std::min(keep, corpus.size())));
}

std::vector<std::vector<Token>> sample_prompts(const Corpus& held_out, std::size_t count, std::size_t len,
                                               std::uint64_t seed) {
  Rng rng = Rng(seed).split(0x9a0);
  std::vector<std::vector<Token>> prompts;
  for (std::size_t p = 0; p < count; ++p) {
    const auto& seq = held_out[static_cast<std::size_t>(rng.uniform() * static_cast<double>(held_out.size()))];
    const std::size_t n = std::min(len, seq.size());
    const std::size_t start = static_cast<std::size_t>(rng.uniform() * static_cast<double>(seq.size() - n + 1));
    prompts.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(start),
                         seq.begin() + static_cast<std::ptrdiff_t>(start + n));
  }
  return prompts;
}

void accumulate(Metrics& into, const Metrics& m) {
  into.target_forward_passes += m.target_forward_passes;
  into.draft_forward_passes += m.draft_forward_passes;
  into.retrieval_calls += m.retrieval_calls;
  into.tokens_generated += m.tokens_generated;
  into.verified_node_total += m.verified_node_total;
  into.elapsed_seconds += m.elapsed_seconds;
  into.per_step_accepts.insert(into.per_step_accepts.end(), m.per_step_accepts.begin(), m.per_step_accepts.end());
}

EngineConfig arm_config(const BenchSpec& spec, Arm arm) {
  EngineConfig cfg = spec.engine;
  cfg.max_new_tokens = spec.gen_len;
  cfg.cost = spec.cost;
  switch (arm) {
    case Arm::kBaseline:
    case Arm::kRasd:
      break;
    case Arm::kDraftOnly:
      cfg.retrieval_mode = RetrievalMode::kNone;
      break;
    case Arm::kRetrievalOnly:
      cfg.use_draft = false;
      cfg.prune.enabled = false;
      break;
  }
  return cfg;
}

void summarize(ArmSummary& s, const CostModel& cost) {
  double sum_tau = 0.0, sum_sr = 0.0, sum_nodes = 0.0;
  for (auto& row : s.rows) {
    auto& m = row.metrics;
    m.tau = m.target_forward_passes == 0
                ? 0.0
                : static_cast<double>(m.tokens_generated) / static_cast<double>(m.target_forward_passes);
    m.sr_proxy = speedup_proxy(m, cost);
    sum_tau += m.tau;
    sum_sr += m.sr_proxy;
    sum_nodes += static_cast<double>(m.verified_node_total);
  }
  const double n = static_cast<double>(s.rows.size());
  s.mean_tau = sum_tau / n;
  s.mean_sr = sum_sr / n;
  s.mean_verified_nodes = sum_nodes / n;
  double var_tau = 0.0, var_sr = 0.0;
  for (const auto& row : s.rows) {
    var_tau += (row.metrics.tau - s.mean_tau) * (row.metrics.tau - s.mean_tau);
    var_sr += (row.metrics.sr_proxy - s.mean_sr) * (row.metrics.sr_proxy - s.mean_sr);
  }
  s.std_tau = s.rows.size() > 1 ? std::sqrt(var_tau / (n - 1)) : 0.0;
  s.std_sr = s.rows.size() > 1 ? std::sqrt(var_sr / (n - 1)) : 0.0;
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  spec.validate();
  const Split split = split_corpus(spec.corpus);
  std::size_t vocab = vocab_of(spec.corpus);

  const bool needs_store =
      spec.engine.retrieval_mode == RetrievalMode::kRest || spec.engine.retrieval_mode == RetrievalMode::kBoth;
  std::optional<Datastore> store;
  if (!needs_store) {
    // No arm queries a corpus store.
  } else if (spec.store) {
    vocab = std::max(vocab, spec.store->vocab_size());
    store = spec.store_fraction < 1.0
                ? build_datastore(leading_fraction(spec.store->sequences(), spec.store_fraction), spec.engine.retrieval,
                                  spec.store->vocab_size())
                : *spec.store;
  } else {
    Corpus store_corpus = split.train;
    if (spec.in_domain) store_corpus.insert(store_corpus.end(), split.held_out.begin(), split.held_out.end());
    store = build_datastore(leading_fraction(store_corpus, spec.store_fraction), spec.engine.retrieval, vocab);
  }

  const MarkovModel target = train_markov(split.train, spec.target_order, spec.target_alpha, vocab);
  const MarkovModel draft = train_markov(split.train, spec.draft_order, spec.draft_alpha, vocab);

  const bool greedy = spec.engine.sampler.temperature <= 0.0;
  const bool need_baseline_text = greedy || spec.cost.wall_clock;

  BenchReport report;
  if (store) {
    report.store_sequences = store->sequences().size();
    report.store_tokens = store->token_count();
  }
  for (Arm a : spec.arms) report.arms.push_back(ArmSummary{a, {}, 0, 0, 0, 0, 0, std::nullopt});
  bool lossless = true;
  Metrics baseline_clock;

  for (std::uint64_t seed : spec.seeds) {
    const auto prompts = sample_prompts(split.held_out, spec.prompt_count, spec.prompt_len, seed);
    std::vector<Metrics> totals(spec.arms.size());
    for (std::size_t p = 0; p < prompts.size(); ++p) {
      std::optional<DecodeResult> baseline;
      const std::uint64_t sampler_seed = Rng(seed).split(p + 1).seed();
      auto run_arm = [&](Arm arm) {
        EngineConfig cfg = arm_config(spec, arm);
        cfg.sampler.seed = sampler_seed;
        if (arm == Arm::kBaseline) return autoregressive_baseline(target, prompts[p], cfg);
        const bool rest = cfg.retrieval_mode == RetrievalMode::kRest || cfg.retrieval_mode == RetrievalMode::kBoth;
        return decode(target, draft, rest ? &*store : nullptr, prompts[p], cfg);
      };
      if (need_baseline_text) {
        baseline = run_arm(Arm::kBaseline);
        accumulate(baseline_clock, baseline->metrics);
      }
      for (std::size_t a = 0; a < spec.arms.size(); ++a) {
        DecodeResult r = spec.arms[a] == Arm::kBaseline && baseline ? *baseline : run_arm(spec.arms[a]);
        if (greedy && baseline && r.tokens != baseline->tokens) lossless = false;
        accumulate(totals[a], r.metrics);
      }
    }
    for (std::size_t a = 0; a < spec.arms.size(); ++a) {
      totals[a].per_step_accepts.clear();
      report.arms[a].rows.push_back(ArmRow{seed, std::move(totals[a])});
    }
  }

  for (auto& s : report.arms) {
    summarize(s, spec.cost);
    if (spec.cost.wall_clock) {
      Metrics run;
      for (const auto& row : s.rows) run.elapsed_seconds += row.metrics.elapsed_seconds;
      s.wall_clock_speedup = wall_clock_speedup(run, baseline_clock);
    }
  }
  if (greedy) report.lossless = lossless;
  return report;
}

std::vector<AblationRow> run_ablation(const BenchSpec& spec, SweepAxis axis, const std::vector<std::string>& values) {
  if (values.empty()) throw ConfigInvalid("ablation needs at least one value");
  auto parse_switch = [](const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigInvalid("expected on/off, got '" + v + "'");
  };
  std::vector<AblationRow> rows;
  for (const auto& value : values) {
    BenchSpec s = spec;
    switch (axis) {
      case SweepAxis::kPrune:
        s.engine.prune.enabled = parse_switch(value);
        break;
      case SweepAxis::kFusion:
        s.engine.fusion_enabled = parse_switch(value);
        break;
      case SweepAxis::kCandLen: {
        const long v = std::stol(value);
        if (v < 1) throw ConfigInvalid("cand_len values must be >= 1");
        s.engine.retrieval.cand_len = static_cast<std::size_t>(v);
        break;
      }
      case SweepAxis::kStoreSize:
        s.store_fraction = std::stod(value);
        break;
    }
    rows.push_back(AblationRow{axis, value, run_bench(s)});
  }
  return rows;
}

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const BenchSpec& spec) {
  const EngineConfig& e = spec.engine;
  ordered_json j;
  j["prompt_count"] = spec.prompt_count;
  j["prompt_len"] = spec.prompt_len;
  j["gen_len"] = spec.gen_len;
  j["target_order"] = spec.target_order;
  j["target_alpha"] = spec.target_alpha;
  j["draft_order"] = spec.draft_order;
  j["draft_alpha"] = spec.draft_alpha;
  j["seeds"] = spec.seeds;
  j["in_domain"] = spec.in_domain;
  j["store_fraction"] = spec.store_fraction;
  j["store_source"] = spec.store ? "file" : "corpus_truncation";
  j["temperature"] = e.sampler.temperature;
  j["retrieval_mode"] = to_string(e.retrieval_mode);
  j["prune"] = e.prune.enabled;
  j["prune_k"] = e.prune.top_k;
  j["fuse"] = e.fusion_enabled;
  j["draft_children_first"] = e.fusion.draft_children_first;
  j["draft_depth"] = e.draft.max_depth;
  j["draft_branch"] = e.draft.branch_k;
  j["draft_beam"] = e.draft.layer_beam;
  j["draft_total"] = e.draft.total_nodes;
  j["n_max"] = e.retrieval.n_max;
  j["n_min"] = e.retrieval.n_min;
  j["num_candidates"] = e.retrieval.num_candidates;
  j["cand_len"] = e.retrieval.cand_len;
  j["pld_retry_depth"] = e.retrieval.pld_retry_depth;
  j["pld_retry_k"] = e.retrieval.pld_retry_k;
  j["retrieval_node_budget"] = e.retrieval_node_budget;
  j["c_target"] = spec.cost.c_target;
  j["c_draft"] = spec.cost.c_draft;
  j["c_retrieval"] = spec.cost.c_retrieval;
  return j;
}

ordered_json report_json(const BenchReport& report) {
  ordered_json arms = ordered_json::array();
  for (const auto& s : report.arms) {
    ordered_json a;
    a["arm"] = to_string(s.arm);
    a["mean_tau"] = s.mean_tau;
    a["std_tau"] = s.std_tau;
    a["mean_sr"] = s.mean_sr;
    a["std_sr"] = s.std_sr;
    a["mean_verified_node_total"] = s.mean_verified_nodes;
    if (s.wall_clock_speedup) a["wall_clock_speedup"] = *s.wall_clock_speedup;
    ordered_json rows = ordered_json::array();
    for (const auto& r : s.rows) {
      ordered_json row;
      row["seed"] = r.seed;
      row["target_forward_passes"] = r.metrics.target_forward_passes;
      row["draft_forward_passes"] = r.metrics.draft_forward_passes;
      row["retrieval_calls"] = r.metrics.retrieval_calls;
      row["tokens_generated"] = r.metrics.tokens_generated;
      row["verified_node_total"] = r.metrics.verified_node_total;
      row["tau"] = r.metrics.tau;
      row["sr_proxy"] = r.metrics.sr_proxy;
      rows.push_back(std::move(row));
    }
    a["rows"] = std::move(rows);
    arms.push_back(std::move(a));
  }
  ordered_json deltas = ordered_json::array();
  for (std::size_t i = 0; i < report.arms.size(); ++i) {
    for (std::size_t k = i + 1; k < report.arms.size(); ++k) {
      ordered_json d;
      d["from"] = to_string(report.arms[i].arm);
      d["to"] = to_string(report.arms[k].arm);
      d["tau"] = report.arms[k].mean_tau - report.arms[i].mean_tau;
      d["sr"] = report.arms[k].mean_sr - report.arms[i].mean_sr;
      deltas.push_back(std::move(d));
    }
  }
  ordered_json j;
  j["store_sequences"] = report.store_sequences;
  j["store_tokens"] = report.store_tokens;
  j["losslessness"] = report.lossless ? (*report.lossless ? "pass" : "fail") : "not-applicable";
  j["arms"] = std::move(arms);
  j["deltas"] = std::move(deltas);
  return j;
}

std::string fmt_double(double v, int prec) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

std::string bench_report_json(const BenchSpec& spec, const BenchReport& report) {
  ordered_json j;
  j["command"] = "bench";
  j["config"] = config_json(spec);
  j.update(report_json(report));
  return j.dump(2) + "\n";
}

std::string ablation_report_json(const BenchSpec& spec, const std::vector<AblationRow>& rows) {
  ordered_json j;
  j["command"] = "ablate";
  j["config"] = config_json(spec);
  if (!rows.empty()) {
    j["axis"] = to_string(rows.front().axis);
    if (rows.front().axis == SweepAxis::kStoreSize) j["store_size_semantics"] = "leading fraction of store corpus";
  }
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row[to_string(r.axis)] = r.value;
    row.update(report_json(r.report));
    out.push_back(std::move(row));
  }
  j["rows"] = std::move(out);
  return j.dump(2) + "\n";
}

std::string bench_summary_table(const BenchReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-15s %8s %8s %8s %10s %10s %9s %11s\n", "method", "tau", "std", "SR",
                "target", "draft", "retrieval", "nodes");
  os << line;
  for (const auto& s : report.arms) {
    std::uint64_t target = 0, draft = 0, retr = 0;
    for (const auto& r : s.rows) {
      target += r.metrics.target_forward_passes;
      draft += r.metrics.draft_forward_passes;
      retr += r.metrics.retrieval_calls;
    }
    std::snprintf(line, sizeof line, "%-15s %8s %8s %8s %10llu %10llu %9llu %11s\n", to_string(s.arm),
                  fmt_double(s.mean_tau, 3).c_str(), fmt_double(s.std_tau, 3).c_str(),
                  fmt_double(s.mean_sr, 3).c_str(), static_cast<unsigned long long>(target),
                  static_cast<unsigned long long>(draft), static_cast<unsigned long long>(retr),
                  fmt_double(s.mean_verified_nodes, 0).c_str());
    os << line;
  }
  os << "losslessness: " << (report.lossless ? (*report.lossless ? "pass" : "FAIL") : "n/a (stochastic)") << "\n";
  return os.str();
}

std::string ablation_summary_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << "== " << to_string(r.axis) << " = " << r.value << "\n" << bench_summary_table(r.report);
  }
  return os.str();
}

}  // namespace rasd::harness
