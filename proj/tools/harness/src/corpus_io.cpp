// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasd/harness/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "rasd/errors.hpp"

namespace rasd::harness {

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> seq;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      Token t = 0;
      auto [next, ec] = std::from_chars(p, end, t);
      if (ec != std::errc() || t < 0) {
        throw ConfigInvalid("corpus line " + std::to_string(line_no) + ": expected a non-negative token id");
      }
      seq.push_back(t);
      p = next;
    }
    if (!seq.empty()) corpus.push_back(std::move(seq));
  }
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open corpus " + path.string());
  return parse_corpus(in);
}

Corpus read_text_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open text corpus " + path.string());
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Token> seq;
    seq.reserve(line.size());
    for (unsigned char c : line) seq.push_back(static_cast<Token>(c));
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out << ' ';
      out << seq[i];
    }
    out << '\n';
  }
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  write_corpus(out, corpus);
  if (!out) throw IoFailure("write failed for " + path.string());
}

std::size_t vocab_of(const Corpus& corpus) {
  Token max_token = -1;
  for (const auto& s : corpus) {
    for (Token t : s) max_token = std::max(max_token, t);
  }
  return static_cast<std::size_t>(max_token + 1);
}

}  // namespace rasd::harness
