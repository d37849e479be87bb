// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/error.hpp"

namespace qring {

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::Ok: return "Ok";
    case Status::InvalidArgument: return "InvalidArgument";
    case Status::NonUnitary: return "NonUnitary";
    case Status::NotUnitary: return "NotUnitary";
    case Status::SingularMap: return "SingularMap";
    case Status::ScanExhausted: return "ScanExhausted";
    case Status::InternalInvariant: return "InternalInvariant";
    case Status::RankMismatch: return "RankMismatch";
    case Status::NotSusyCase: return "NotSusyCase";
    case Status::Ambiguous: return "Ambiguous";
    case Status::Inconsistent: return "Inconsistent";
    case Status::DegenerateTail: return "DegenerateTail";
    case Status::NoisyTail: return "NoisyTail";
    case Status::DivisionGuard: return "DivisionGuard";
    case Status::OutOfDomain: return "OutOfDomain";
    case Status::NoConvergence: return "NoConvergence";
    case Status::NonConvergent: return "NonConvergent";
    case Status::Unsupported: return "Unsupported";
    case Status::NotSpecialUnitary: return "NotSpecialUnitary";
  }
  return "Unknown";
}

}  // namespace qring
