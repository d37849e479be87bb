// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qring {

enum class Status {
  Ok = 0,
  InvalidArgument,
  NonUnitary,
  NotUnitary,
  SingularMap,
  ScanExhausted,
  InternalInvariant,
  RankMismatch,
  NotSusyCase,
  Ambiguous,
  Inconsistent,
  DegenerateTail,
  NoisyTail,
  DivisionGuard,
  OutOfDomain,
  NoConvergence,
  NonConvergent,
  Unsupported,
  NotSpecialUnitary,
};

const char* status_name(Status s) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Status code() const noexcept { return code_; }

 private:
  Status code_;
};

}  // namespace qring
