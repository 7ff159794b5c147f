// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "rasd/harness/corpus_io.hpp"

namespace rasd::harness {

struct SyntheticCorpusSpec {
  std::size_t vocab_size = 32;
  std::size_t source_order = 2;
  std::size_t length = 20000;          // total tokens
  double repetition_rate = 0.5;        // fraction of tokens copied from earlier spans
  std::uint64_t seed = 1;
  std::size_t sequence_length = 500;   // tokens per line
  double peakedness = 2.5;             // log-normal sigma of the source's successor weights

  void validate() const;
};

/// Seeded random Markov source with copied earlier spans spliced in. Half of
/// the copies come from the current sequence (prompt-lookup friendly), the
/// rest from anywhere earlier in the corpus (datastore friendly).
Corpus synthesize_corpus(const SyntheticCorpusSpec& spec);

/// Fraction of n-gram windows whose n-gram occurs at least twice in the corpus.
double repeated_ngram_fraction(const Corpus& corpus, std::size_t n);

}  // namespace rasd::harness
