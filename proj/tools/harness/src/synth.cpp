// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "rasd/errors.hpp"
#include "rasd/models.hpp"
#include "rasd/rng.hpp"

namespace rasd::harness {

void SyntheticCorpusSpec::validate() const {
  if (vocab_size < 2) throw ConfigInvalid("synthetic vocab_size must be >= 2");
  if (length < 1 || sequence_length < 1) throw ConfigInvalid("synthetic lengths must be >= 1");
  if (!(repetition_rate >= 0.0 && repetition_rate <= 1.0)) throw ConfigInvalid("repetition_rate must be in [0, 1]");
  if (!(peakedness > 0.0)) throw ConfigInvalid("peakedness must be > 0");
}

namespace {

constexpr std::size_t kMinSpan = 8;
constexpr std::size_t kMaxSpan = 32;

class MarkovSource {
 public:
  explicit MarkovSource(const SyntheticCorpusSpec& spec) : spec_(spec), root_(spec.seed) {}

  Token next(const std::vector<Token>& history, Rng& rng) {
    std::vector<Token> ctx(history.end() - static_cast<std::ptrdiff_t>(std::min(spec_.source_order, history.size())),
                           history.end());
    return sample_from(successors(ctx), rng.uniform());
  }

 private:
  const Distribution& successors(const std::vector<Token>& ctx) {
    auto it = cache_.find(ctx);
    if (it != cache_.end()) return it->second;
    std::uint64_t h = 0x51ed270b27a1f1c3ULL;
    for (Token t : ctx) h = h * 1000003ULL + static_cast<std::uint64_t>(t) + 1;
    h = h * 1000003ULL + ctx.size();
    Rng r = root_.split(h);
    std::vector<double> w(spec_.vocab_size);
    for (auto& x : w) {
      // Box-Muller from two uniforms.
      const double u1 = std::max(r.uniform(), 1e-300);
      const double u2 = r.uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      x = std::exp(spec_.peakedness * z);
    }
    return cache_.emplace(ctx, Distribution(std::move(w))).first->second;
  }

  const SyntheticCorpusSpec& spec_;
  Rng root_;
  std::map<std::vector<Token>, Distribution> cache_;
};

}  // namespace

Corpus synthesize_corpus(const SyntheticCorpusSpec& spec) {
  spec.validate();
  MarkovSource source(spec);
  Rng rng = Rng(spec.seed).split(0xC0FFEE);

  Corpus corpus;
  std::size_t produced = 0;
  auto draw_span = [&] { return kMinSpan + static_cast<std::size_t>(rng.uniform() * (kMaxSpan - kMinSpan + 1)); };

  while (produced < spec.length) {
    const std::size_t target_len = std::min(spec.sequence_length, spec.length - produced);
    std::vector<Token> seq;
    seq.reserve(target_len);
    while (seq.size() < target_len) {
      const std::size_t span = std::min(draw_span(), target_len - seq.size());
      const bool want_copy = rng.uniform() < spec.repetition_rate;
      const bool from_self = rng.uniform() < 0.5;
      const std::vector<Token>* src = nullptr;
      if (want_copy && from_self && seq.size() >= kMinSpan) {
        src = &seq;
      } else if (want_copy && !corpus.empty()) {
        src = &corpus[static_cast<std::size_t>(rng.uniform() * static_cast<double>(corpus.size()))];
      } else if (want_copy && seq.size() >= kMinSpan) {
        src = &seq;
      }
      if (src != nullptr) {
        const std::size_t avail = src == &seq ? seq.size() : src->size();
        const std::size_t len = std::min(span, avail);
        const std::size_t start = static_cast<std::size_t>(rng.uniform() * static_cast<double>(avail - len + 1));
        // Index-based copy: the source may be the sequence being grown.
        for (std::size_t i = 0; i < len; ++i) seq.push_back((*src)[start + i]);
      } else {
        for (std::size_t i = 0; i < span; ++i) seq.push_back(source.next(seq, rng));
      }
    }
    produced += seq.size();
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

double repeated_ngram_fraction(const Corpus& corpus, std::size_t n) {
  std::map<std::vector<Token>, std::size_t> counts;
  std::size_t windows = 0;
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
      ++counts[std::vector<Token>(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                  seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
      ++windows;
    }
  }
  if (windows == 0) return 0.0;
  std::size_t repeated = 0;
  for (const auto& [gram, c] : counts) {
    if (c >= 2) repeated += c;
  }
  return static_cast<double>(repeated) / static_cast<double>(windows);
}

}  // namespace rasd::harness
