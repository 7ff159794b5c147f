// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rasd/distribution.hpp"

namespace rasd::harness {

using Corpus = std::vector<std::vector<Token>>;

/// One sequence per line, space-separated decimal ids. Blank lines are skipped.
Corpus parse_corpus(std::istream& in);
Corpus read_corpus(const std::filesystem::path& path);

/// Byte-level ingestion: each line of a UTF-8 file becomes one sequence of
/// byte values (vocab 256).
Corpus read_text_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

std::size_t vocab_of(const Corpus& corpus);

}  // namespace rasd::harness
