// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qring/error.hpp"
#include "qring/inverse.hpp"
#include "qring/random.hpp"

using namespace qring;
using oracle::pi;

namespace {

const Geometry unit{1.0, 1.0};

SpectrumPrefix lattice(int n, bool zero, std::vector<double> kappa = {}) {
  SpectrumPrefix p;
  p.geom = unit;
  for (int i = 1; i <= n; ++i) p.positive_k.push_back(pi * i);
  p.has_zero_mode = zero;
  p.negative_kappa = std::move(kappa);
  return p;
}

SpectrumPrefix forward(const SpectralTriple& t, int n, const Geometry& g = unit) {
  return prefix_from_spectrum(full_spectrum(t, g, n), g);
}

SpectrumPrefix case_two_synthetic(int pairs) {
  SpectrumPrefix p;
  p.geom = unit;
  for (int n = 0; n < pairs; ++n) {
    p.positive_k.push_back(2 * pi / 3 + 2 * pi * n);
    p.positive_k.push_back(4 * pi / 3 + 2 * pi * n);
  }
  return p;
}

}  // namespace

TEST_CASE("case labels") {
  CHECK(classify_case(lattice(40, false)).kind == CaseKind::I);
  CHECK(classify_case(case_two_synthetic(20)).kind == CaseKind::II);
  CHECK(classify_case(forward({pi / 4, 0.0, 0.0}, 64)).kind == CaseKind::III);
  const auto lab = case_statistics(case_two_synthetic(20));
  CHECK(lab.tail_cos_mean == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(lab.tail_cos_spread < 1e-12);
}

TEST_CASE("case I recovery") {
  const auto z = recover_case_I(lattice(40, true));
  CHECK(z.xi == 0.0);
  CHECK(z.alpha_r == 1.0);
  CHECK(z.beta_i == 0.0);
  const auto d = recover_case_I(lattice(40, false));
  CHECK(d.alpha_r == -1.0);
  const auto r = recover_case_I(lattice(40, false, {1.0}));
  CHECK(std::abs(r.alpha_r) < 1e-15);
  const auto q = recover_case_I(lattice(40, false, {0.5}));
  CHECK(q.alpha_r == doctest::Approx(0.6));
  CHECK_THROWS_AS(recover_case_I(lattice(40, true, {1.0})), Error);
  CHECK_THROWS_AS(recover_case_I(lattice(40, false, {1.0, 2.0})), Error);
}

TEST_CASE("case I recovery from forward spectra never sets xi or beta_I") {
  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const SpectralTriple t{0.0, rng.uniform(-1, 1), 0.0};
    const auto p = forward(t, 40);
    REQUIRE(classify_case(p).kind == CaseKind::I);
    const auto r = recover_case_I(p);
    CHECK(r.xi == 0.0);
    CHECK(r.beta_i == 0.0);
    CHECK(std::abs(r.alpha_r - t.alpha_r) < 1e-9);
  }
}

TEST_CASE("doublet lattices") {
  const auto plus = recover_parameters(forward({pi / 2, 0.0, -1.0}, 40), false);
  CHECK(triple_distance(plus.triple, {pi / 2, 0.0, -1.0}) < 1e-12);
  const auto minus = recover_parameters(forward({pi / 2, 0.0, 1.0}, 40), false);
  CHECK(triple_distance(minus.triple, {pi / 2, 0.0, 1.0}) < 1e-12);
}

TEST_CASE("case II recovery") {
  const auto t = recover_case_II(case_two_synthetic(20));
  CHECK(triple_distance(t, {pi / 2, 0.0, 0.5}) < 1e-9);

  const SpectralTriple ref{pi / 3, -0.5, 0.3};
  const auto p = forward(ref, 400);
  REQUIRE(classify_case(p).kind == CaseKind::II);
  CHECK(triple_distance(recover_case_II(p), ref) < 1e-6);

  const SpectralTriple q{pi / 4, -std::sqrt(0.5), 0.0};
  CHECK(triple_distance(recover_case_II(forward(q, 64)), q) < 1e-9);

  SpectrumPrefix flat = lattice(40, false);
  CHECK_THROWS_AS(recover_case_II(flat), Error);
}

TEST_CASE("asymptotic coefficients of a case III spectrum") {
  const auto c = estimate_c_coeffs(forward({pi / 4, 0.0, 0.0}, 200));
  CHECK(c.c1_plus == doctest::Approx(-2 / pi).epsilon(1e-6));
  CHECK(c.c1_minus == doctest::Approx(-2 / pi).epsilon(1e-6));
  CHECK(std::abs(c.a1) < 1e-6);
  CHECK(c.a2 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c.a3 == doctest::Approx(1.0).epsilon(1e-4));

  const auto f1 = estimate_c_coeffs(forward({pi / 6, 0.2, 0.0}, 200));
  CHECK(std::abs(f1.c1_plus - f1.c1_minus) < 1e-8);
  CHECK(std::abs(f1.a1) < 1e-8);
}

TEST_CASE("synthetic asymptotic sequences") {
  const double c1p = -0.4, c1m = -0.7, c3p = 0.3, c3m = -0.2;
  SpectrumPrefix p;
  p.geom = unit;
  for (int n = 1; n <= 64; ++n) {
    const bool even = n % 2 == 0;
    p.positive_k.push_back(pi * n + (even ? c1p : c1m) / n + (even ? c3p : c3m) / (n * n * n));
  }
  AsymptoticCoeffs c;
  try {
    c = estimate_c_coeffs(p);
  } catch (const Error& e) {
    CHECK(e.code() != Status::NoisyTail);
  }
  CHECK(std::abs(c.c1_plus - c1p) < 1e-6);
  CHECK(std::abs(c.c1_minus - c1m) < 1e-6);
  CHECK(std::abs(c.c3_plus - c3p) < 1e-6);
  CHECK(std::abs(c.c3_minus - c3m) < 1e-6);
  CHECK(c.a1 == doctest::Approx(-pi / 2 * (c1p - c1m)).epsilon(1e-6));
}

TEST_CASE("case III inversion") {
  AsymptoticCoeffs a;
  a.a1 = 0.0;
  a.a2 = 2.0;
  a.a3 = 1.0;
  CHECK(triple_distance(recover_case_III(a, unit), {pi / 4, 0.0, 0.0}) < 1e-12);

  AsymptoticCoeffs s;
  s.a1 = -2.0;
  s.a2 = 2.0;
  s.a3 = -1.0;
  CHECK_THROWS_AS(recover_case_III(s, unit), Error);

  AsymptoticCoeffs z;
  z.a3 = 0.5;
  const auto t = recover_case_III(z, unit);
  CHECK(std::abs(std::sin(t.xi)) < 1e-12);
  CHECK(t.beta_i == 0.0);

  AsymptoticCoeffs g;
  g.a2 = 0.0;
  g.a3 = -1.0;
  CHECK_THROWS_AS(recover_case_III(g, unit), Error);
}

TEST_CASE("a1 shares the sign of beta_I when cos xi + alpha_R > 0") {
  Rng rng(42);
  int checked = 0;
  while (checked < 10) {
    const double xi = rng.uniform(0.2, 1.2), ar = rng.uniform(-0.3, 0.5), bi = rng.uniform(-0.6, 0.6);
    if (std::cos(xi) + ar <= 0.1 || std::abs(bi) < 0.05) continue;
    const auto c = exact_a_coeffs(forward({xi, ar, bi}, 64));
    CHECK((c.a1 > 0) == (bi > 0));
    ++checked;
  }
}

TEST_CASE("fit oracle") {
  const auto s = fit_parameters(forward({pi / 2, 0.0, -1.0}, 40));
  CHECK(triple_distance(s.triple, {pi / 2, 0.0, -1.0}) < 1e-9);
  CHECK(s.residual < 1e-12);
  const auto d = fit_parameters(lattice(40, false));
  CHECK(triple_distance(d.triple, {0.0, -1.0, 0.0}) < 1e-9);

  const SpectralTriple ref{1.1, 0.2, -0.4};
  auto p = forward(ref, 60);
  Rng rng(43);
  for (double& k : p.positive_k) k += rng.uniform(-1e-8, 1e-8);
  CHECK(triple_distance(fit_parameters(p).triple, ref) < 1e-6);
}

TEST_CASE("round trips through the dispatcher") {
  Rng rng(44);
  for (int i = 0; i < 40; ++i) {
    const auto u = from_matrix(haar_u2(rng));
    const auto t = spectral_triple(u);
    const auto p = forward(t, 200);
    const auto asym = recover_parameters(p, false, 7);
    CHECK(triple_distance(asym.triple, t) < 1e-3);
    const auto fit = fit_parameters(p, 7);
    CHECK(triple_distance(fit.triple, t) < 1e-9);
  }
}

TEST_CASE("prefix validation") {
  SpectrumPrefix p = lattice(20, false);
  std::swap(p.positive_k[0], p.positive_k[1]);
  CHECK_THROWS_AS(p.validate(), Error);
  SpectrumPrefix q = lattice(20, false, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(q.validate(), Error);
}
