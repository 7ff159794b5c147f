// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rasd/distribution.hpp"
#include "rasd/draft.hpp"
#include "rasd/models.hpp"

namespace rasd {

struct RetrievalConfig {
  std::size_t n_max = 4;
  std::size_t n_min = 1;
  std::size_t num_candidates = 8;  // n
  std::size_t cand_len = 8;        // l
  std::size_t pld_retry_depth = 2;
  std::size_t pld_retry_k = 2;

  void validate() const;
};

/// Retrieved continuations, longest suffix match first. Parallel vectors.
struct CandidateSet {
  std::vector<std::vector<Token>> candidates;
  std::vector<std::size_t> match_len;
  std::vector<std::uint64_t> frequency;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  bool contains(std::span<const Token> c) const;
  /// Appends unless an equal candidate is already present. Returns true if added.
  bool add(std::vector<Token> c, std::size_t match, std::uint64_t freq);

  bool operator==(const CandidateSet&) const = default;
};

struct OccurrenceSite {
  std::uint32_t sequence;
  std::uint32_t end;  // one past the last n-gram token
  bool operator==(const OccurrenceSite&) const = default;
};

/// Token corpus with an exact-match n-gram index over lengths
/// [index_min, index_max]. Immutable once built.
class Datastore {
 public:
  Datastore(std::vector<std::vector<Token>> sequences, std::size_t index_min, std::size_t index_max,
            std::size_t vocab_size = 0);

  const std::vector<std::vector<Token>>& sequences() const { return sequences_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t index_min() const { return index_min_; }
  std::size_t index_max() const { return index_max_; }
  std::size_t key_count() const;
  std::size_t token_count() const;

  /// Every occurrence of `ngram` in corpus order; empty if its length is not
  /// indexed or it never occurs.
  std::span<const OccurrenceSite> sites(std::span<const Token> ngram) const;

 private:
  std::vector<std::vector<Token>> sequences_;
  std::size_t index_min_;
  std::size_t index_max_;
  std::size_t vocab_size_;
  std::vector<std::unordered_map<std::string, std::vector<OccurrenceSite>>> index_;  // by length - index_min
};

/// Throws EmptyCorpus when the corpus holds no tokens.
Datastore build_datastore(std::vector<std::vector<Token>> corpus, const RetrievalConfig& cfg,
                          std::size_t vocab_size = 0);

/// Suffix-match retrieval: for i = n_max down to n_min, look up the length-i
/// suffix of `query` and collect the next cand_len tokens after each
/// occurrence, deduplicated, until num_candidates are found. Throws
/// QueryTooShort when the query is shorter than n_min.
CandidateSet retrieve_suffix_match(const Datastore& store, std::span<const Token> query, const RetrievalConfig& cfg);

/// Prompt-lookup retrieval against the live context. When nothing matches,
/// extends the query with the draft model's most likely tokens (breadth
/// first, up to pld_retry_depth appended tokens) and prefixes any hit with
/// those tokens. `draft` may be null, which disables the retry.
CandidateSet pld_retrieve(const GenerationState& state, Token y0, const DraftResult* draft,
                          const RetrievalConfig& cfg, std::uint64_t* lookups = nullptr);

/// Corpus retrieval: a single suffix-match query with context || y0.
CandidateSet rest_retrieve(const Datastore& store, const GenerationState& state, Token y0,
                           const RetrievalConfig& cfg);

inline constexpr std::uint32_t kDatastoreFormatVersion = 1;

std::vector<std::uint8_t> serialize_datastore(const Datastore& store);
Datastore deserialize_datastore(std::span<const std::uint8_t> bytes, const RetrievalConfig& cfg);

void save_datastore(const Datastore& store, std::ostream& sink);
void save_datastore(const Datastore& store, const std::filesystem::path& path);
/// The index is rebuilt from the sequences using cfg's n range.
Datastore load_datastore(std::istream& source, const RetrievalConfig& cfg);
Datastore load_datastore(const std::filesystem::path& path, const RetrievalConfig& cfg);

}  // namespace rasd
