// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/random.hpp"

#include <cmath>

namespace qring {

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Mat2 haar_su2(Rng& rng) {
  double q[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : q) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 < 1e-300);
  const double n = std::sqrt(n2);
  const cplx a(q[0] / n, q[1] / n);
  const cplx b(q[2] / n, q[3] / n);
  Mat2 m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

Mat2 haar_u2(Rng& rng) {
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  return std::polar(1.0, phi) * haar_su2(rng);
}

}  // namespace qring
