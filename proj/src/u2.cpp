// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/u2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qring/error.hpp"

namespace qring {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b, double tol) { return std::abs(a - b) < tol; }

// Distance of xi from 0 on the circle xi ~ xi + pi.
double xi_from_zero(double xi) {
  double x = std::fmod(xi, kPi);
  if (x < 0) x += kPi;
  return std::min(x, kPi - x);
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// L0 cot(phi/2) with |cot| > 1e14 mapped to +inf and |cot| < 1e-14 to zero.
double cot_length(double l0, double phi) {
  const double s = std::sin(phi / 2);
  const double c = std::cos(phi / 2);
  if (std::abs(s) * 1e14 < std::abs(c)) return kInf;
  if (std::abs(c) * 1e14 < std::abs(s)) return 0.0;
  double v = l0 * c / s;
  if (v == 0.0) v = 0.0;  // drop negative zero
  return v;
}

}  // namespace

Mat2 pauli1() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli2() {
  Mat2 m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat2 pauli3() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

void CharacteristicMatrix::validate(double tol) const {
  const double n = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol)
    throw Error(Status::InvalidArgument, "|alpha|^2 + |beta|^2 must equal 1");
  if (!(xi >= 0.0 && xi < kPi)) throw Error(Status::InvalidArgument, "xi must lie in [0, pi)");
}

void SpectralTriple::validate(double tol) const {
  if (!std::isfinite(xi) || !std::isfinite(alpha_r) || !std::isfinite(beta_i))
    throw Error(Status::InvalidArgument, "non-finite spectral triple");
  if (alpha_r * alpha_r + beta_i * beta_i > 1.0 + tol)
    throw Error(Status::OutOfDomain, "alpha_R^2 + beta_I^2 exceeds 1");
  if (!(xi >= 0.0 && xi < kPi)) throw Error(Status::InvalidArgument, "xi must lie in [0, pi)");
}

void Geometry::validate() const {
  if (!(std::isfinite(l) && l > 0.0) || !(std::isfinite(l0) && l0 > 0.0))
    throw Error(Status::InvalidArgument, "geometry lengths must be positive and finite");
}

double unitarity_defect(const Mat2& m) {
  return max_abs(m.adjoint() * m - Mat2::Identity());
}

CharacteristicMatrix from_matrix(const Mat2& m, double tol) {
  if (!m.allFinite()) throw Error(Status::NonUnitary, "matrix has non-finite entries");
  const double defect = unitarity_defect(m);
  if (defect > tol)
    throw Error(Status::NonUnitary, "matrix is not unitary (defect " + std::to_string(defect) + ")");
  double xi = 0.5 * std::arg(m.determinant());
  if (xi < 0) xi += kPi;
  if (xi >= kPi) xi -= kPi;
  if (xi == 0.0) xi = 0.0;  // drop negative zero
  const Mat2 w = std::exp(cplx(0, -xi)) * m;
  cplx alpha = 0.5 * (w(0, 0) + std::conj(w(1, 1)));
  cplx beta = 0.5 * (w(0, 1) - std::conj(w(1, 0)));
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  return {xi, alpha / n, beta / n};
}

Mat2 to_matrix(const CharacteristicMatrix& u) {
  Mat2 m;
  m << u.alpha, u.beta, -std::conj(u.beta), std::conj(u.alpha);
  return std::exp(cplx(0, u.xi)) * m;
}

SpectralTriple spectral_triple(const CharacteristicMatrix& u) {
  return {u.xi, u.alpha.real(), u.beta.imag()};
}

CharacteristicMatrix canonical_matrix(const SpectralTriple& t) {
  double ar = t.alpha_r;
  double bi = t.beta_i;
  const double r2 = 1.0 - ar * ar - bi * bi;
  double rest = 0.0;
  if (r2 < 1e-15) {
    const double n = std::hypot(ar, bi);
    ar /= n;
    bi /= n;
  } else {
    rest = std::sqrt(r2);
  }
  return {t.xi, cplx(ar, rest), cplx(0.0, bi)};
}

CharacteristicMatrix parity_map(const CharacteristicMatrix& u) {
  return {u.xi, std::conj(u.alpha), -std::conj(u.beta)};
}

CharacteristicMatrix time_reversal_map(const CharacteristicMatrix& u) {
  return {u.xi, u.alpha, -std::conj(u.beta)};
}

CharacteristicMatrix pt_map(const CharacteristicMatrix& u) {
  return {u.xi, std::conj(u.alpha), u.beta};
}

CharacteristicMatrix p_theta_map(const CharacteristicMatrix& u, double theta) {
  const cplx z = std::polar(1.0, theta) * cplx(u.beta.real(), u.alpha.imag());
  return {u.xi, cplx(u.alpha.real(), z.imag()), cplx(z.real(), u.beta.imag())};
}

CharacteristicMatrix induced_map(const CharacteristicMatrix& u, const Mat2& m, const Mat2& n,
                                 double tol) {
  const Mat2 uu = to_matrix(u);
  const Mat2 id = Mat2::Identity();
  const Mat2 den = m * (id + uu) + n * (id - uu);
  Eigen::JacobiSVD<Mat2> svd(den);
  const auto sv = svd.singularValues();
  if (!(sv(1) > 0.0) || sv(0) / sv(1) >= 1e12)
    throw Error(Status::SingularMap, "M(I+U)+N(I-U) is not invertible");
  const Mat2 uw = (m * (id + uu) - n * (id - uu)) * den.inverse();
  if (unitarity_defect(uw) > tol)
    throw Error(Status::NotUnitary, "induced matrix is not unitary; W is not a generalized symmetry");
  return from_matrix(uw, tol);
}

CharacteristicMatrix snap_to_locus(const CharacteristicMatrix& u, double tol) {
  if (std::abs(u.alpha.imag()) >= tol || std::abs(u.beta.real()) >= tol) return u;
  const double ar = u.alpha.real();
  const double bi = u.beta.imag();
  const double n = std::hypot(ar, bi);
  return {u.xi, cplx(ar / n, 0.0), cplx(0.0, bi / n)};
}

SubfamilyReport classify(const CharacteristicMatrix& u, const Geometry& geom, double tol) {
  geom.validate();
  SubfamilyReport r;
  const Mat2 m = to_matrix(u);
  const Mat2 id = Mat2::Identity();
  const double ai = u.alpha.imag();
  const double ar = u.alpha.real();
  const double br = u.beta.real();
  const double bi = u.beta.imag();

  r.f_p = std::abs(ai) < tol && std::abs(br) < tol;
  r.f_t = std::abs(br) < tol;
  r.f_pt = std::abs(ai) < tol;
  r.f1 = std::abs(u.beta) < tol;
  const bool plus_identity = max_abs(m - id) < tol;
  const bool minus_identity = max_abs(m + id) < tol;
  const bool sphere = near(u.xi, kPi / 2, tol) && std::abs(ar) < tol;
  r.f2 = sphere || plus_identity || minus_identity;
  r.f3 = sphere && std::abs(ai) < tol;
  r.f4 = xi_from_zero(u.xi) < tol && std::abs(bi) < tol;
  r.f5 = near(std::sin(u.xi), bi, tol) || near(std::sin(u.xi), -bi, tol);
  r.self_dual = std::abs(m(0, 1)) < tol && std::abs(m(1, 0)) < tol &&
                std::abs(m(0, 0) - m(1, 1)) < tol;
  r.susy_plus = max_abs(m - pauli1()) < tol;
  r.susy_minus = max_abs(m + pauli1()) < tol;

  if (r.f1) {
    const double acs = std::acos(std::clamp(ar, -1.0, 1.0));
    r.separated_lengths = {cot_length(geom.l0, u.xi + acs), cot_length(geom.l0, u.xi - acs)};
    r.wall_lengths = {cot_length(geom.l0, std::arg(m(0, 0))),
                      cot_length(geom.l0, std::arg(m(1, 1)))};
  }
  return r;
}

double triple_distance(const SpectralTriple& a, const SpectralTriple& b) {
  auto dist = [](double x0, double a0, double b0, const SpectralTriple& t) {
    return std::max({std::abs(x0 - t.xi), std::abs(a0 - t.alpha_r), std::abs(b0 - t.beta_i)});
  };
  return std::min({dist(a.xi, a.alpha_r, a.beta_i, b),
                   dist(a.xi + kPi, -a.alpha_r, -a.beta_i, b),
                   dist(a.xi - kPi, -a.alpha_r, -a.beta_i, b)});
}

}  // namespace qring
