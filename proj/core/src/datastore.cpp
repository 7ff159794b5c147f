// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/datastore.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "rasd/errors.hpp"

namespace rasd {

namespace {

std::string key_of(std::span<const Token> ngram) {
  std::string key(ngram.size() * sizeof(Token), '\0');
  if (!ngram.empty()) std::memcpy(key.data(), ngram.data(), key.size());
  return key;
}

}  // namespace

void RetrievalConfig::validate() const {
  if (n_min < 1 || n_min > n_max) throw ConfigInvalid("retrieval requires 1 <= n_min <= n_max");
  if (num_candidates < 1) throw ConfigInvalid("num_candidates must be >= 1");
  if (cand_len < 1) throw ConfigInvalid("cand_len must be >= 1");
  if (pld_retry_k < 1) throw ConfigInvalid("pld_retry_k must be >= 1");
}

bool CandidateSet::contains(std::span<const Token> c) const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const auto& x) { return std::equal(x.begin(), x.end(), c.begin(), c.end()); });
}

bool CandidateSet::add(std::vector<Token> c, std::size_t match, std::uint64_t freq) {
  if (contains(c)) return false;
  candidates.push_back(std::move(c));
  match_len.push_back(match);
  frequency.push_back(freq);
  return true;
}

Datastore::Datastore(std::vector<std::vector<Token>> sequences, std::size_t index_min, std::size_t index_max,
                     std::size_t vocab_size)
    : sequences_(std::move(sequences)), index_min_(index_min), index_max_(index_max), vocab_size_(vocab_size) {
  if (index_min_ < 1 || index_min_ > index_max_) throw ConfigInvalid("datastore index range invalid");
  if (sequences_.size() > std::numeric_limits<std::uint32_t>::max()) throw ConfigInvalid("too many sequences");
  Token max_token = -1;
  for (const auto& seq : sequences_) {
    if (seq.size() > std::numeric_limits<std::uint32_t>::max()) throw ConfigInvalid("sequence too long");
    for (Token t : seq) {
      if (t < 0) throw std::out_of_range("datastore: negative token id");
      max_token = std::max(max_token, t);
    }
  }
  if (vocab_size_ == 0) {
    vocab_size_ = static_cast<std::size_t>(max_token + 1);
  } else if (max_token >= 0 && static_cast<std::size_t>(max_token) >= vocab_size_) {
    throw std::out_of_range("datastore: token outside vocabulary");
  }

  index_.resize(index_max_ - index_min_ + 1);
  for (std::size_t s = 0; s < sequences_.size(); ++s) {
    const std::span<const Token> seq(sequences_[s]);
    for (std::size_t len = index_min_; len <= index_max_; ++len) {
      auto& table = index_[len - index_min_];
      for (std::size_t end = len; end <= seq.size(); ++end) {
        table[key_of(seq.subspan(end - len, len))].push_back(
            OccurrenceSite{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(end)});
      }
    }
  }
}

std::size_t Datastore::key_count() const {
  std::size_t n = 0;
  for (const auto& t : index_) n += t.size();
  return n;
}

std::size_t Datastore::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sequences_) n += s.size();
  return n;
}

std::span<const OccurrenceSite> Datastore::sites(std::span<const Token> ngram) const {
  if (ngram.size() < index_min_ || ngram.size() > index_max_) return {};
  const auto& table = index_[ngram.size() - index_min_];
  auto it = table.find(key_of(ngram));
  if (it == table.end()) return {};
  return it->second;
}

Datastore build_datastore(std::vector<std::vector<Token>> corpus, const RetrievalConfig& cfg, std::size_t vocab_size) {
  cfg.validate();
  const bool any = std::any_of(corpus.begin(), corpus.end(), [](const auto& s) { return !s.empty(); });
  if (!any) throw EmptyCorpus("build_datastore: corpus has no tokens");
  return Datastore(std::move(corpus), cfg.n_min, cfg.n_max, vocab_size);
}

CandidateSet retrieve_suffix_match(const Datastore& store, std::span<const Token> query, const RetrievalConfig& cfg) {
  cfg.validate();
  if (query.size() < cfg.n_min) {
    throw QueryTooShort("query length " + std::to_string(query.size()) + " < n_min " + std::to_string(cfg.n_min));
  }
  if (cfg.n_min < store.index_min() || cfg.n_max > store.index_max()) {
    throw ConfigInvalid("retrieval n range is not covered by the datastore index");
  }
  CandidateSet out;
  for (std::size_t i = cfg.n_max; i >= cfg.n_min; --i) {
    if (out.size() >= cfg.num_candidates) break;
    if (i > query.size()) continue;
    const auto suffix = query.subspan(query.size() - i);
    const auto sites = store.sites(suffix);
    for (const auto& site : sites) {
      const auto& seq = store.sequences()[site.sequence];
      const std::size_t take = std::min(cfg.cand_len, seq.size() - site.end);
      if (take == 0) continue;
      const auto first = seq.begin() + static_cast<std::ptrdiff_t>(site.end);
      out.add(std::vector<Token>(first, first + static_cast<std::ptrdiff_t>(take)), i, sites.size());
      if (out.size() >= cfg.num_candidates) break;
    }
  }
  return out;
}

namespace {

// Children of the draft node reached by following `path` (tokens after y0),
// ordered by draft probability then token id.
std::vector<Token> draft_extensions(const DraftResult& draft, std::span<const Token> path, std::size_t k) {
  if (path.empty()) return top_k_tokens(draft.first_distribution, std::min(k, draft.first_distribution.size()));
  NodeId node = 0;
  for (Token t : path) {
    auto next = draft.tree.find_child(node, t);
    if (!next) return {};
    node = *next;
  }
  std::vector<NodeId> kids = draft.tree.children(node);
  std::stable_sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
    const double pa = draft.tree.node(a).draft_prob.value_or(0.0);
    const double pb = draft.tree.node(b).draft_prob.value_or(0.0);
    if (pa != pb) return pa > pb;
    return draft.tree.node(a).token < draft.tree.node(b).token;
  });
  std::vector<Token> out;
  for (std::size_t i = 0; i < kids.size() && i < k; ++i) out.push_back(draft.tree.node(kids[i]).token);
  return out;
}

}  // namespace

CandidateSet pld_retrieve(const GenerationState& state, Token y0, const DraftResult* draft, const RetrievalConfig& cfg,
                          std::uint64_t* lookups) {
  cfg.validate();
  // Only the context itself can hold matches, so it is indexed whole.
  std::vector<Token> sequence = state.context;
  sequence.push_back(y0);
  const Datastore store({sequence}, cfg.n_min, cfg.n_max);

  auto query_with = [&](std::span<const Token> extra) {
    std::vector<Token> q = sequence;
    q.insert(q.end(), extra.begin(), extra.end());
    if (q.size() < cfg.n_min) return CandidateSet{};
    if (lookups != nullptr) ++*lookups;
    return retrieve_suffix_match(store, q, cfg);
  };

  CandidateSet found = query_with({});
  if (!found.empty() || draft == nullptr || cfg.pld_retry_depth == 0) return found;

  std::vector<std::vector<Token>> level{{}};
  for (std::size_t depth = 1; depth <= cfg.pld_retry_depth; ++depth) {
    std::vector<std::vector<Token>> next_level;
    for (const auto& prefix : level) {
      for (Token t : draft_extensions(*draft, prefix, cfg.pld_retry_k)) {
        std::vector<Token> extended = prefix;
        extended.push_back(t);
        CandidateSet hit = query_with(extended);
        if (!hit.empty()) {
          CandidateSet prefixed;
          for (std::size_t c = 0; c < hit.size(); ++c) {
            std::vector<Token> full = extended;
            full.insert(full.end(), hit.candidates[c].begin(), hit.candidates[c].end());
            prefixed.add(std::move(full), hit.match_len[c], hit.frequency[c]);
          }
          return prefixed;
        }
        next_level.push_back(std::move(extended));
      }
    }
    level = std::move(next_level);
  }
  return {};
}

CandidateSet rest_retrieve(const Datastore& store, const GenerationState& state, Token y0, const RetrievalConfig& cfg) {
  const std::size_t keep = std::min(cfg.n_max, state.context.size());
  std::vector<Token> query(state.context.end() - static_cast<std::ptrdiff_t>(keep), state.context.end());
  query.push_back(y0);
  if (query.size() < cfg.n_min) return {};
  return retrieve_suffix_match(store, query, cfg);
}

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ChecksumMismatch("datastore payload truncated");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(static_cast<T>(bytes[pos + b]) << (8 * b));
  pos += sizeof(T);
  return value;
}

constexpr char kMagic[4] = {'R', 'A', 'S', 'D'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

std::uint64_t byte_sum(std::span<const std::uint8_t> bytes) {
  std::uint64_t sum = 0;
  for (auto b : bytes) sum += b;
  return sum;
}

}  // namespace

std::vector<std::uint8_t> serialize_datastore(const Datastore& store) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 + store.token_count() * 4 + store.sequences().size() * 8);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, kDatastoreFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.vocab_size()));
  put_le<std::uint64_t>(out, store.sequences().size());
  for (const auto& seq : store.sequences()) {
    put_le<std::uint64_t>(out, seq.size());
    for (Token t : seq) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t));
  }
  put_le<std::uint64_t>(out, byte_sum(out));
  return out;
}

Datastore deserialize_datastore(std::span<const std::uint8_t> bytes, const RetrievalConfig& cfg) {
  cfg.validate();
  if (bytes.size() >= 4 && !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatVersionMismatch("bad magic bytes");
  }
  if (bytes.size() < kHeaderBytes + 8) throw ChecksumMismatch("datastore file truncated");
  const auto body = bytes.first(bytes.size() - 8);
  std::size_t tail = body.size();
  if (get_le<std::uint64_t>(bytes, tail) != byte_sum(body)) throw ChecksumMismatch("checksum does not match payload");

  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(body, pos);
  if (version != kDatastoreFormatVersion) {
    throw FormatVersionMismatch("version " + std::to_string(version) + ", expected " +
                                std::to_string(kDatastoreFormatVersion));
  }
  const auto vocab = get_le<std::uint32_t>(body, pos);
  const auto count = get_le<std::uint64_t>(body, pos);
  if (count > (body.size() - pos) / 8) throw ChecksumMismatch("sequence count exceeds payload");
  std::vector<std::vector<Token>> sequences;
  sequences.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    const auto len = get_le<std::uint64_t>(body, pos);
    if (len > (body.size() - pos) / 4) throw ChecksumMismatch("sequence length exceeds payload");
    std::vector<Token> seq(len);
    for (auto& t : seq) {
      const auto raw = get_le<std::uint32_t>(body, pos);
      if (vocab != 0 && raw >= vocab) throw ChecksumMismatch("token outside declared vocabulary");
      t = static_cast<Token>(raw);
    }
    sequences.push_back(std::move(seq));
  }
  if (pos != body.size()) throw ChecksumMismatch("trailing bytes before checksum");
  return Datastore(std::move(sequences), cfg.n_min, cfg.n_max, vocab);
}

void save_datastore(const Datastore& store, std::ostream& sink) {
  const auto bytes = serialize_datastore(store);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw IoFailure("write failed");
}

void save_datastore(const Datastore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  save_datastore(store, out);
}

Datastore load_datastore(std::istream& source, const RetrievalConfig& cfg) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
  if (source.bad()) throw IoFailure("read failed");
  return deserialize_datastore(bytes, cfg);
}

Datastore load_datastore(const std::filesystem::path& path, const RetrievalConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return load_datastore(in, cfg);
}

}  // namespace rasd
