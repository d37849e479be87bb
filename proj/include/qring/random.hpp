// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "qring/u2.hpp"

namespace qring {

// Deterministic across standard libraries: only the raw mt19937_64 stream is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Mat2 haar_u2(Rng& rng);
Mat2 haar_su2(Rng& rng);

}  // namespace qring
