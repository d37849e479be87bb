// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qring/error.hpp"
#include "qring/random.hpp"
#include "qring/twopoint.hpp"

using namespace qring;
using oracle::pi;

namespace {

const Geometry unit{1.0, 1.0};

TwoPointSystem pair_of(const Mat2& a, const Mat2& b) { return {from_matrix(a), from_matrix(b), unit}; }

Mat2 rotation(const Mat2& gen, double rho) {
  return std::cos(rho) * Mat2::Identity() + cplx(0, std::sin(rho)) * gen;
}

double spectrum_gap(const Spectrum& a, const Spectrum& b) {
  if (a.levels.size() != b.levels.size()) return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    if (a.levels[i].multiplicity != b.levels[i].multiplicity || a.levels[i].sector != b.levels[i].sector)
      return INFINITY;
    worst = std::max(worst, std::abs(a.levels[i].energy - b.levels[i].energy) /
                                std::max(1.0, std::abs(b.levels[i].energy)));
  }
  return worst;
}

}  // namespace

TEST_CASE("block secular matrix of free joints") {
  const auto sys = pair_of(oracle::s1(), oracle::s1());
  for (int n = 1; n <= 4; ++n) CHECK(block_secular(sys, 2 * pi * n).merit < 1e-12);
  CHECK(block_secular(sys, pi).merit > 1e-3);
  CHECK(block_secular(sys, 2.3).merit > 1e-3);
  const auto b = block_secular(sys, 1.0);
  CHECK(oracle::max_abs(b.u_block.topLeftCorner<2, 2>() - oracle::s1()) < 1e-14);
  CHECK(std::abs(b.sigma3(1, 1) + 1.0) < 1e-15);
  // Continuity at small k.
  CHECK(std::abs(block_secular(sys, 1e-7).merit - block_secular(sys, 2e-7).merit) < 1e-5);
}

TEST_CASE("block secular matrix of decoupled Dirichlet halves") {
  const auto sys = pair_of(-Mat2::Identity(), -Mat2::Identity());
  for (int n = 1; n <= 4; ++n) CHECK(block_secular(sys, 2 * pi * n).merit < 1e-12);
  CHECK(block_secular(sys, pi).merit > 1e-3);
}

TEST_CASE("two-point spectra of named pairs") {
  const auto free = spectrum2(pair_of(oracle::s1(), oracle::s1()), 8);
  REQUIRE(free.levels.size() == 9);
  CHECK(free.levels[0].sector == Sector::Zero);
  for (std::size_t n = 1; n < 9; ++n) {
    CHECK(std::abs(free.levels[n].wavenumber - 2 * pi * n) < 1e-10);
    CHECK(free.levels[n].multiplicity == 2);
  }
  const auto box = spectrum2(pair_of(-Mat2::Identity(), -Mat2::Identity()), 8);
  REQUIRE(box.levels.size() == 8);
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(box.levels[n].sector == Sector::Positive);
    CHECK(std::abs(box.levels[n].wavenumber - 2 * pi * (n + 1)) < 1e-10);
    CHECK(box.levels[n].multiplicity == 2);
  }
  // Neumann halves: zero doublet, then doublets at 2 pi n.
  const auto nn = spectrum2(pair_of(Mat2::Identity(), Mat2::Identity()), 4);
  REQUIRE(nn.levels.size() >= 1);
  CHECK(nn.levels[0].sector == Sector::Zero);
  CHECK(nn.levels[0].multiplicity == 2);
}

TEST_CASE("free joint reduces to the one-point circle") {
  Rng rng(61);
  for (int i = 0; i < 10; ++i) {
    const auto u1 = from_matrix(haar_u2(rng));
    const auto two = spectrum2({u1, from_matrix(oracle::s1()), unit}, 20);
    const auto one = full_spectrum(u1, unit, 20);
    CHECK(spectrum_gap(two, one) < 1e-8);
  }
}

TEST_CASE("conjugation") {
  Rng rng(62);
  const auto sys = pair_of(haar_u2(rng), haar_u2(rng));
  const auto same = conjugate_pair(sys, Mat2::Identity());
  CHECK(oracle::max_abs(to_matrix(same.u1) - to_matrix(sys.u1)) < 1e-14);

  const auto s1sys = pair_of(haar_u2(rng), oracle::s1());
  const auto c = conjugate_pair(s1sys, rotation(oracle::s1(), 0.7));
  CHECK(oracle::max_abs(to_matrix(c.u2) - oracle::s1()) < 1e-14);

  const Mat2 diag = Mat2{{cplx(0.6, 0.8), 0.0}, {0.0, cplx(0.0, 1.0)}};
  const auto dsys = pair_of(haar_u2(rng), diag);
  CHECK(oracle::max_abs(to_matrix(conjugate_pair(dsys, rotation(oracle::s3(), 1.1)).u2) - diag) < 1e-14);

  CHECK_THROWS_AS(conjugate_pair(sys, 2.0 * Mat2::Identity()), Error);
  CHECK_THROWS_AS(conjugate_pair(sys, cplx(0, 1) * Mat2::Identity()), Error);
}

TEST_CASE("conjugation invariance of two-point spectra") {
  Rng rng(63);
  for (int i = 0; i < 8; ++i) {
    const auto sys = pair_of(haar_u2(rng), haar_u2(rng));
    const auto base = spectrum2(sys, 15);
    const auto moved = spectrum2(conjugate_pair(sys, haar_su2(rng)), 15);
    CHECK(spectrum_gap(moved, base) < 1e-8);
  }
}

TEST_CASE("self-dual second point admits the full group") {
  Rng rng(64);
  const Mat2 scalar = std::polar(1.0, pi / 5) * Mat2::Identity();
  CHECK(isospectral_group_of(from_matrix(scalar)).full_su2);
  for (int i = 0; i < 4; ++i) {
    const auto u1 = from_matrix(haar_u2(rng));
    const TwoPointSystem sys{u1, from_matrix(scalar), unit};
    const auto base = spectrum2(sys, 12);
    for (int j = 0; j < 3; ++j) {
      const TwoPointSystem moved{conjugate_pair(sys, haar_su2(rng)).u1, sys.u2, unit};
      CHECK(spectrum_gap(spectrum2(moved, 12), base) < 1e-8);
    }
  }
}

TEST_CASE("isospectral axis") {
  const auto a = isospectral_group_of(from_matrix(oracle::s1()));
  CHECK_FALSE(a.full_su2);
  CHECK(oracle::max_abs(a.axis - oracle::s1()) < 1e-14);
  const auto b = isospectral_group_of(from_matrix(oracle::s3()));
  CHECK(oracle::max_abs(b.axis - oracle::s3()) < 1e-14);
  Rng rng(65);
  for (int i = 0; i < 20; ++i) {
    const Mat2 u = haar_u2(rng);
    const auto g = isospectral_group_of(from_matrix(u));
    REQUIRE_FALSE(g.full_su2);
    const Mat2 v = rotation(g.axis, rng.uniform(0, pi));
    CHECK(oracle::max_abs(v * u * v.adjoint() - u) < 1e-12);
  }
}

TEST_CASE("diagonalization") {
  const auto s = diagonalize_u(from_matrix(oracle::s1()));
  CHECK(s.theta_plus == doctest::Approx(pi));
  CHECK(std::abs(s.theta_minus) < 1e-14);
  CHECK(std::abs(std::abs(s.v(0, 0)) - std::sqrt(0.5)) < 1e-14);
  CHECK(std::abs(std::abs(s.v(0, 1)) - std::sqrt(0.5)) < 1e-14);

  const Mat2 diag = Mat2{{cplx(0.6, 0.8), 0.0}, {0.0, cplx(0.0, -1.0)}};
  const auto d = diagonalize_u(from_matrix(diag));
  CHECK(oracle::max_abs(d.v.cwiseAbs().cast<cplx>() - Mat2::Identity()) < 1e-14);

  Rng rng(66);
  for (int i = 0; i < 200; ++i) {
    const Mat2 u = haar_u2(rng);
    const auto r = diagonalize_u(from_matrix(u));
    CHECK(r.theta_plus >= r.theta_minus);
    CHECK(r.theta_plus <= pi);
    CHECK(r.theta_minus > -pi);
    CHECK(std::abs(r.v.determinant() - 1.0) < 1e-12);
    Mat2 dm = Mat2::Zero();
    dm(0, 0) = std::polar(1.0, r.theta_plus);
    dm(1, 1) = std::polar(1.0, r.theta_minus);
    CHECK(oracle::max_abs(r.v.inverse() * dm * r.v - u) < 1e-10);
  }
}

TEST_CASE("doubled states") {
  const std::vector<cplx> one(16, 1.0);
  const auto c = doubled_state(one);
  REQUIRE(c.first.size() == 9);
  for (std::size_t j = 0; j < 9; ++j) CHECK(std::abs(c.second[j] - 1.0) < 1e-15);

  const int n = 32;
  std::vector<cplx> wave(n);
  for (int j = 0; j < n; ++j) wave[j] = std::polar(1.0, 2 * pi * j / n);
  const auto w = doubled_state(wave);
  for (int j = 0; j <= n / 2; ++j) {
    CHECK(std::abs(w.first[j] - std::polar(1.0, 2 * pi * j / n)) < 1e-14);
    CHECK(std::abs(w.second[j] - std::polar(1.0, -2 * pi * j / n)) < 1e-14);
  }

  Rng rng(67);
  std::vector<cplx> psi(40);
  for (auto& z : psi) z = cplx(rng.normal(), rng.normal());
  const auto phi = doubled_state(psi);
  const auto back = undoubled_state(phi);
  REQUIRE(back.size() == psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) CHECK(back[j] == psi[j]);

  // Trapezoid weights on the half circle reproduce the full-circle sum.
  double full = 0, half = 0;
  for (const auto& z : psi) full += std::norm(z);
  const std::size_t h = phi.first.size();
  for (std::size_t j = 0; j < h; ++j) {
    const double wgt = (j == 0 || j + 1 == h) ? 0.5 : 1.0;
    half += wgt * (std::norm(phi.first[j]) + std::norm(phi.second[j]));
  }
  CHECK(half == doctest::Approx(full).epsilon(1e-14));
}
