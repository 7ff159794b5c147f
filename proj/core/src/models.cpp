// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/models.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "rasd/errors.hpp"

namespace rasd {

MarkovModel::MarkovModel(std::size_t order, std::size_t vocab_size, double alpha)
    : order_(order), vocab_size_(vocab_size), alpha_(alpha), tables_(order + 1) {
  if (vocab_size == 0) throw ConfigInvalid("MarkovModel: vocab_size must be positive");
  if (!(alpha > 0.0)) throw ConfigInvalid("MarkovModel: alpha must be > 0");
}

std::string MarkovModel::key_of(std::span<const Token> context) {
  std::string key(context.size() * sizeof(Token), '\0');
  if (!context.empty()) std::memcpy(key.data(), context.data(), key.size());
  return key;
}

const MarkovModel::CountRow* MarkovModel::counts(std::span<const Token> context) const {
  if (context.size() > order_) return nullptr;
  const auto& table = tables_[context.size()];
  auto it = table.find(key_of(context));
  return it == table.end() ? nullptr : &it->second;
}

std::size_t MarkovModel::context_count() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

void MarkovModel::add_observation(std::span<const Token> context, Token next) {
  if (context.size() > order_) throw std::invalid_argument("add_observation: context longer than order");
  if (next < 0 || static_cast<std::size_t>(next) >= vocab_size_) {
    throw std::out_of_range("add_observation: token outside vocabulary");
  }
  auto& row = tables_[context.size()][key_of(context)];
  if (row.counts.empty()) row.counts.assign(vocab_size_, 0);
  ++row.counts[static_cast<std::size_t>(next)];
  ++row.total;
}

Distribution MarkovModel::next_distribution(std::span<const Token> context) const {
  const std::size_t max_len = std::min(order_, context.size());
  const CountRow* row = nullptr;
  for (std::size_t len = max_len + 1; len-- > 0;) {
    row = counts(context.subspan(context.size() - len));
    if (row != nullptr) break;
  }
  std::vector<double> probs(vocab_size_);
  if (row == nullptr) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(vocab_size_));
    return Distribution(std::move(probs));
  }
  const double denom = static_cast<double>(row->total) + alpha_ * static_cast<double>(vocab_size_);
  for (std::size_t t = 0; t < vocab_size_; ++t) {
    probs[t] = (static_cast<double>(row->counts[t]) + alpha_) / denom;
  }
  return Distribution(std::move(probs));
}

MarkovModel train_markov(const std::vector<std::vector<Token>>& corpus, std::size_t order, double alpha,
                         std::size_t vocab_size) {
  bool any = false;
  Token max_token = -1;
  for (const auto& seq : corpus) {
    for (Token t : seq) {
      if (t < 0) throw std::out_of_range("train_markov: negative token id");
      max_token = std::max(max_token, t);
      any = true;
    }
  }
  if (!any) throw EmptyCorpus("train_markov: corpus has no tokens");
  if (vocab_size == 0) vocab_size = static_cast<std::size_t>(max_token) + 1;

  MarkovModel model(order, vocab_size, alpha);
  for (const auto& seq : corpus) {
    const std::span<const Token> s(seq);
    for (std::size_t pos = 0; pos < s.size(); ++pos) {
      const std::size_t max_len = std::min(order, pos);
      for (std::size_t len = 0; len <= max_len; ++len) {
        model.add_observation(s.subspan(pos - len, len), s[pos]);
      }
    }
  }
  return model;
}

std::vector<Distribution> tree_forward(const LanguageModel& model, const GenerationState& state, const FlatTree& flat,
                                       ForwardPassCounter* counter) {
  const std::size_t window = model.context_window();
  const std::size_t n = flat.size();
  // Only the trailing `window` tokens of the committed context can matter.
  const std::size_t keep = std::min(window, state.context.size());
  std::vector<Token> ctx(state.context.end() - static_cast<std::ptrdiff_t>(keep), state.context.end());
  const std::size_t prefix = ctx.size();

  std::vector<Distribution> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ctx.resize(prefix);
    for (std::size_t j = 0; j <= i; ++j) {
      if (flat.mask(i, j)) ctx.push_back(flat.tokens[j]);
    }
    out.push_back(model.next_distribution(ctx));
  }
  if (counter != nullptr) ++counter->passes;
  return out;
}

Token sample_from(const Distribution& dist, double u) {
  auto probs = dist.probs();
  double cum = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_nonzero = i;
    cum += probs[i];
    if (u < cum) return static_cast<Token>(i);
  }
  return static_cast<Token>(last_nonzero);
}

Token sample(const Distribution& dist, const SamplerConfig& cfg, Rng& rng) {
  if (cfg.temperature <= 0.0) return argmax(dist);
  const Distribution tempered = apply_temperature(dist, cfg.temperature);
  return sample_from(tempered, rng.uniform());
}

}  // namespace rasd
