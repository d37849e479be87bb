// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "oracles.hpp"
#include "qring/error.hpp"
#include "qring/kernels.hpp"
#include "qring/random.hpp"

using namespace qring;
using oracle::pi;

namespace {

const Geometry unit{1.0, 1.0};

double neumann_oracle(double a, double b, double tau, double l) {
  double s = 1.0 / l;
  for (int n = 1; n <= 400; ++n) {
    const double k = n * pi / l;
    s += 2.0 / l * std::cos(k * a) * std::cos(k * b) * std::exp(-0.5 * k * k * tau);
  }
  return s;
}

double dn_oracle(double a, double b, double tau, double l) {
  double s = 0;
  for (int n = 0; n <= 400; ++n) {
    const double k = (n + 0.5) * pi / l;
    s += 2.0 / l * std::sin(k * a) * std::sin(k * b) * std::exp(-0.5 * k * k * tau);
  }
  return s;
}

// Twisted ring: psi(0) = e^{i theta} psi(l) admits e^{ikx} with k l = -theta mod 2 pi.
cplx twisted_oracle(double theta, double a, double b, double tau, double l) {
  cplx s = 0;
  for (int m = -400; m <= 400; ++m) {
    const double k = (2 * pi * m - theta) / l;
    s += std::polar(1.0, k * (b - a)) * std::exp(-0.5 * k * k * tau) / l;
  }
  return s;
}

CharacteristicMatrix random_f2(Rng& rng) {
  const double ai = rng.uniform(-0.9, 0.9);
  const double rest = std::sqrt(1 - ai * ai);
  const double ph = rng.uniform(0, 2 * pi);
  return {pi / 2, cplx(0.0, ai), std::polar(rest, ph)};
}

// Composite Gauss-Legendre on (0, 1); the open rule keeps clear of x = l.
template <class K>
cplx integrate(K f, int panels = 20) {
  cplx s = 0;
  for (int p = 0; p < panels; ++p) {
    auto g = [&](double x) { return f((p + x) / panels); };
    s += boost::math::quadrature::gauss<double, 30>::integrate(
             [&](double x) { return g(x).real(); }, 0.0, 1.0) +
         cplx(0, 1) * boost::math::quadrature::gauss<double, 30>::integrate(
                          [&](double x) { return g(x).imag(); }, 0.0, 1.0);
  }
  return s / double(panels);
}

}  // namespace

TEST_CASE("box kernels against mode sums") {
  for (double tau : {0.05, 0.1, 0.5}) {
    for (double a : {0.1, 0.45, 0.83}) {
      for (double b : {0.2, 0.5, 0.97}) {
        const auto q = euclidean_query(a, b, tau);
        CHECK(std::abs(box_kernel(BoxCase::DD, unit, q) - oracle::dirichlet_kernel(a, b, tau, 1.0)) < 1e-12);
        CHECK(std::abs(box_kernel(BoxCase::NN, unit, q) - neumann_oracle(a, b, tau, 1.0)) < 1e-12);
        CHECK(std::abs(box_kernel(BoxCase::DN, unit, q) - dn_oracle(a, b, tau, 1.0)) < 1e-12);
        CHECK(std::abs(box_kernel(BoxCase::ND, unit, q) - dn_oracle(1 - a, 1 - b, tau, 1.0)) < 1e-12);
      }
    }
  }
  const Geometry g{2.5, 1.0};
  const auto q = euclidean_query(0.7, 1.9, 0.3);
  CHECK(std::abs(box_kernel(BoxCase::DD, g, q) - oracle::dirichlet_kernel(0.7, 1.9, 0.3, 2.5)) < 1e-12);
}

TEST_CASE("box case identification") {
  CHECK(box_case_of(from_matrix(-Mat2::Identity())) == BoxCase::DD);
  CHECK(box_case_of(from_matrix(Mat2::Identity())) == BoxCase::NN);
  CHECK(box_case_of(from_matrix(-oracle::s3())) == BoxCase::DN);
  CHECK(box_case_of(from_matrix(oracle::s3())) == BoxCase::ND);
  CHECK_THROWS_AS(box_case_of(from_matrix(oracle::s1())), Error);
}

TEST_CASE("Dirichlet trace") {
  const double tau = 0.1;
  const cplx tr = integrate([&](double x) { return box_kernel(BoxCase::DD, unit, euclidean_query(x, x, tau)); });
  double sum = 0;
  for (int n = 1; n < 200; ++n) sum += std::exp(-0.5 * n * n * pi * pi * tau);
  CHECK(std::abs(tr - sum) < 1e-10);
}

TEST_CASE("Dirichlet kernel vanishes on the walls") {
  for (double b : {0.1, 0.5, 0.9}) {
    CHECK(std::abs(box_kernel(BoxCase::DD, unit, euclidean_query(0.0, b, 0.1))) < 1e-14);
    CHECK(std::abs(box_kernel(BoxCase::DD, unit, euclidean_query(1.0 - 1e-15, b, 0.1))) < 1e-14);
  }
}

TEST_CASE("smooth ring kernels") {
  for (double theta : {0.0, pi / 3, pi, 2.0}) {
    for (double tau : {0.05, 0.1, 0.5}) {
      for (auto [a, b] : {std::pair{0.1, 0.6}, {0.9, 0.05}, {0.4, 0.4}}) {
        const auto q = euclidean_query(a, b, tau);
        CHECK(std::abs(smooth_kernel(theta, unit, q) - twisted_oracle(theta, a, b, tau, 1.0)) < 1e-12);
      }
    }
  }
  // Translation along the ring away from the junction.
  for (double s : {0.05, 0.2}) {
    const cplx k0 = smooth_kernel(pi / 3, unit, euclidean_query(0.1, 0.4, 0.1));
    const cplx k1 = smooth_kernel(pi / 3, unit, euclidean_query(0.1 + s, 0.4 + s, 0.1));
    CHECK(std::abs(k0 - k1) < 1e-13);
  }
  CHECK(smooth_theta_of(from_matrix(smooth_matrix(1.2))) == doctest::Approx(1.2));
}

TEST_CASE("scale-invariant kernel reduces to the closed forms") {
  const auto q = euclidean_query(0.3, 0.8, 0.1);
  const ScaleInvariantKernel dd(from_matrix(-Mat2::Identity()), unit);
  CHECK(std::abs(dd(q) - box_kernel(BoxCase::DD, unit, q)) < 1e-13);
  const ScaleInvariantKernel nn(from_matrix(Mat2::Identity()), unit);
  CHECK(std::abs(nn(q) - box_kernel(BoxCase::NN, unit, q)) < 1e-13);
  const ScaleInvariantKernel sm(from_matrix(smooth_matrix(0.7)), unit);
  CHECK(std::abs(sm(q) - smooth_kernel(0.7, unit, q)) < 1e-13);
  CHECK(sm.unimodular(10));
  CHECK_THROWS_AS(ScaleInvariantKernel(from_matrix(oracle::s3() * cplx(0, 1)), unit), Error);
}

TEST_CASE("generic F2 weights are not unimodular") {
  Rng rng(51);
  for (int i = 0; i < 5; ++i) CHECK_FALSE(ScaleInvariantKernel(random_f2(rng), unit).unimodular(10));
}

TEST_CASE("hermiticity and semigroup of the F2 kernel") {
  Rng rng(52);
  for (int i = 0; i < 3; ++i) {
    const ScaleInvariantKernel k(random_f2(rng), unit);
    for (auto [a, b] : {std::pair{0.2, 0.7}, {0.9, 0.1}}) {
      CHECK(std::abs(k(euclidean_query(a, b, 0.1)) - std::conj(k(euclidean_query(b, a, 0.1)))) < 1e-13);
      const cplx lhs = k(euclidean_query(a, b, 0.12));
      const cplx rhs = integrate([&](double c) {
        return k(euclidean_query(c, b, 0.05)) * k(euclidean_query(a, c, 0.07));
      });
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("real time requires an image budget") {
  KernelQuery q{0.2, 0.4, cplx(0.1, 0.0), 1e-15, 0};
  CHECK_THROWS_AS(box_kernel(BoxCase::DD, unit, q), Error);
  q.n_max = 50;
  CHECK(std::isfinite(std::abs(box_kernel(BoxCase::DD, unit, q))));
  CHECK_THROWS_AS(euclidean_query(0.2, 1.4, 0.1).validate(unit), Error);
}

TEST_CASE("closed forms agree with the spectral sum") {
  std::vector<KernelQuery> pts;
  for (double tau : {0.05, 0.1, 0.5})
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) pts.push_back(euclidean_query((i + 0.5) / 6, (j + 0.5) / 6, tau));
  for (const Mat2& m : {Mat2(-Mat2::Identity()), Mat2(Mat2::Identity()), Mat2(-oracle::s3()),
                        Mat2(oracle::s3())}) {
    const auto r = kernel_crosscheck(from_matrix(m), unit, pts, 80);
    CHECK(r.family == "box");
    CHECK(r.max_deviation < 1e-8);
    CHECK(r.unimodular);
  }
  for (double theta : {0.0, pi / 3, pi}) {
    const auto r = kernel_crosscheck(from_matrix(smooth_matrix(theta)), unit, pts, 80);
    CHECK(r.family == "smooth");
    CHECK(r.max_deviation < 1e-8);
  }
  Rng rng(53);
  for (int i = 0; i < 3; ++i) {
    const auto r = kernel_crosscheck(random_f2(rng), unit, pts, 80);
    CHECK(r.family == "f2");
    CHECK(r.max_deviation < 1e-8);
    CHECK_FALSE(r.unimodular);
  }
}
