// Copyright 2026 The RASD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rasd {

/// Base of every error the library raises. Callers that only need to tell
/// "bad input" from "broken invariant" can catch `Error` and `InvariantBreach`.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RASD_DEFINE_ERROR(Name)           \
  class Name : public Error {             \
   public:                                \
    explicit Name(const std::string& what) \
        : Error(#Name ": " + what) {}      \
  }

RASD_DEFINE_ERROR(MalformedTree);
RASD_DEFINE_ERROR(ZeroResidual);
RASD_DEFINE_ERROR(EmptyCorpus);
RASD_DEFINE_ERROR(BadK);
RASD_DEFINE_ERROR(QueryTooShort);
RASD_DEFINE_ERROR(IoFailure);
RASD_DEFINE_ERROR(FormatVersionMismatch);
RASD_DEFINE_ERROR(ChecksumMismatch);
RASD_DEFINE_ERROR(RootMismatch);
RASD_DEFINE_ERROR(TooLarge);
RASD_DEFINE_ERROR(ConfigInvalid);

// Raised when a mathematically impossible state is reached. The CLI maps this
// to exit code 2, every other Error to exit code 1.
RASD_DEFINE_ERROR(InvariantBreach);

#undef RASD_DEFINE_ERROR

}  // namespace rasd
