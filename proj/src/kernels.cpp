// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "qring/error.hpp"

namespace qring {

namespace {

// Images needed so that every dropped term of a unit-weight sum over displacements
// d0 + n * period stays below tol.
int image_count(double d0, double period, const KernelQuery& q) {
  if (q.n_max > 0) return q.n_max;
  const double tau = -q.time.imag();
  if (!(tau > 0.0))
    throw Error(Status::NonConvergent, "real-time image sums need an explicit image budget");
  const double at = std::abs(q.time);
  const double sigma = at * at / tau;
  const double pref = 1.0 / std::sqrt(2.0 * kPi * at);
  const double logs = std::log(std::max(1.0, pref / q.truncation_tol));
  const double reach = std::abs(d0) + std::sqrt(2.0 * sigma * logs);
  return static_cast<int>(std::ceil(reach / period)) + 2;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

void KernelQuery::validate(const Geometry& g) const {
  g.validate();
  if (!(time.imag() <= 0.0) || std::abs(time) == 0.0 || !std::isfinite(std::abs(time)))
    throw Error(Status::InvalidArgument, "kernel time must be nonzero with Im(time) <= 0");
  if (!(truncation_tol > 0.0)) throw Error(Status::InvalidArgument, "truncation_tol must be > 0");
  if (!(a >= 0.0 && a < g.l && b >= 0.0 && b < g.l))
    throw Error(Status::InvalidArgument, "kernel endpoints must lie in [0, l)");
  if (n_max < 0) throw Error(Status::InvalidArgument, "n_max must be >= 0");
}

cplx free_kernel(double d, cplx t) {
  const cplx i(0.0, 1.0);
  return std::sqrt(1.0 / (2.0 * kPi * i * t)) * std::exp(i * d * d / (2.0 * t));
}

const char* box_case_name(BoxCase c) {
  switch (c) {
    case BoxCase::DD: return "DD";
    case BoxCase::NN: return "NN";
    case BoxCase::DN: return "DN";
    case BoxCase::ND: return "ND";
  }
  return "unknown";
}

Mat2 box_matrix(BoxCase c) {
  switch (c) {
    case BoxCase::DD: return -Mat2::Identity();
    case BoxCase::NN: return Mat2::Identity();
    case BoxCase::DN: return -pauli3();
    case BoxCase::ND: return pauli3();
  }
  return Mat2::Identity();
}

BoxCase box_case_of(const CharacteristicMatrix& u, double tol) {
  const Mat2 m = to_matrix(u);
  for (BoxCase c : {BoxCase::DD, BoxCase::NN, BoxCase::DN, BoxCase::ND})
    if (max_abs(m - box_matrix(c)) < tol) return c;
  throw Error(Status::Unsupported, "U is not one of the four box boundary conditions");
}

cplx box_kernel(BoxCase c, const Geometry& g, const KernelQuery& q) {
  q.validate(g);
  const double s0 = (c == BoxCase::DD || c == BoxCase::DN) ? -1.0 : 1.0;
  const double sl = (c == BoxCase::DD || c == BoxCase::ND) ? -1.0 : 1.0;
  const double eps = s0 * sl;
  const int n = image_count(q.a + q.b, 2.0 * g.l, q);
  cplx sum = 0.0;
  for (int j = -n; j <= n; ++j) {
    const double w = (eps < 0 && (j % 2 != 0)) ? -1.0 : 1.0;
    sum += w * (free_kernel(q.b - q.a + 2.0 * j * g.l, q.time) +
                s0 * free_kernel(q.b + q.a + 2.0 * j * g.l, q.time));
  }
  return sum;
}

Mat2 smooth_matrix(double theta) {
  Mat2 m;
  m << 0.0, std::polar(1.0, theta), std::polar(1.0, -theta), 0.0;
  return m;
}

double smooth_theta_of(const CharacteristicMatrix& u, double tol) {
  const Mat2 m = to_matrix(u);
  if (std::abs(m(0, 0)) > tol || std::abs(m(1, 1)) > tol || std::abs(m(1, 0) - std::conj(m(0, 1))) > tol)
    throw Error(Status::Unsupported, "U is not a smooth-circle boundary condition");
  return std::arg(m(0, 1));
}

cplx smooth_kernel(double theta, const Geometry& g, const KernelQuery& q) {
  q.validate(g);
  const int n = image_count(q.b - q.a, g.l, q);
  cplx sum = 0.0;
  for (int j = -n; j <= n; ++j)
    sum += std::polar(1.0, theta * j) * free_kernel(q.b - q.a + j * g.l, q.time);
  return sum;
}

ScaleInvariantKernel::ScaleInvariantKernel(const CharacteristicMatrix& u, const Geometry& g,
                                           double tol)
    : g_(g) {
  g.validate();
  if (!classify(u, g, tol).f2)
    throw Error(Status::Unsupported, "U is not scale independent; no image-sum form");
  w_ = pauli1() * to_matrix(u);
}

Mat2 ScaleInvariantKernel::power(int n) const {
  Mat2 base = n >= 0 ? w_ : Mat2(w_.adjoint());
  Mat2 out = Mat2::Identity();
  for (int e = std::abs(n); e > 0; e >>= 1) {
    if (e & 1) out = out * base;
    base = base * base;
  }
  return out;
}

cplx ScaleInvariantKernel::direct_weight(int n) const { return power(n)(1, 1); }

cplx ScaleInvariantKernel::reflected_weight(int n) const {
  if (n >= 0) return power(n + 1)(1, 0);
  if (n == -1) return 0.0;
  return power(-n - 1)(0, 1);
}

bool ScaleInvariantKernel::unimodular(int n_max, double tol) const {
  for (int n = -n_max; n <= n_max; ++n) {
    for (cplx w : {direct_weight(n), reflected_weight(n)}) {
      const double m = std::abs(w);
      if (m > tol && std::abs(m - 1.0) > tol) return false;
    }
  }
  return true;
}

cplx ScaleInvariantKernel::operator()(const KernelQuery& q) const {
  q.validate(g_);
  const int n = image_count(q.a + q.b, g_.l, q);
  cplx sum = 0.0;
  Mat2 pos = Mat2::Identity();
  std::vector<Mat2> pw(static_cast<std::size_t>(n) + 2);
  for (auto& m : pw) {
    m = pos;
    pos = pos * w_;
  }
  for (int j = -n; j <= n; ++j) {
    const Mat2 wn = j >= 0 ? pw[static_cast<std::size_t>(j)] : Mat2(pw[static_cast<std::size_t>(-j)].adjoint());
    sum += wn(1, 1) * free_kernel(q.b - q.a + j * g_.l, q.time);
    cplx r = 0.0;
    if (j >= 0) r = pw[static_cast<std::size_t>(j) + 1](1, 0);
    else if (j <= -2) r = pw[static_cast<std::size_t>(-j - 1)](0, 1);
    if (r != 0.0) sum += r * free_kernel(q.a + q.b + j * g_.l, q.time);
  }
  return sum;
}

cplx scale_invariant_kernel(const CharacteristicMatrix& u, const Geometry& g, const KernelQuery& q) {
  return ScaleInvariantKernel(u, g)(q);
}

SpectralKernel::SpectralKernel(const CharacteristicMatrix& u, const Geometry& g, int n_levels)
    : spectrum_(full_spectrum(u, g, n_levels)), g_(g) {
  for (const Level& lv : spectrum_.levels)
    for (const Eigenfunction& f : eigenfunction(u, g, lv)) modes_.push_back({f, kernel_energy(lv)});
}

cplx SpectralKernel::operator()(const KernelQuery& q) const {
  q.validate(g_);
  const cplx i(0.0, 1.0);
  cplx sum = 0.0;
  for (const Mode& m : modes_)
    sum += m.f.value(q.b) * std::conj(m.f.value(q.a)) * std::exp(-i * m.energy * q.time);
  return sum;
}

double SpectralKernel::last_term(cplx time) const {
  if (modes_.empty()) return 0.0;
  const double e = modes_.back().energy;
  return 4.0 / g_.l * std::exp(e * time.imag());
}

cplx spectral_kernel(const CharacteristicMatrix& u, const Geometry& g, const KernelQuery& q,
                     int n_levels) {
  return SpectralKernel(u, g, n_levels)(q);
}

CrosscheckReport kernel_crosscheck(const CharacteristicMatrix& u, const Geometry& g,
                                   const std::vector<KernelQuery>& points, int n_levels) {
  CrosscheckReport rep;
  const SubfamilyReport cls = classify(u, g);
  if (!cls.f2) throw Error(Status::Unsupported, "no closed-form kernel outside the box and scale-independent families");
  const ScaleInvariantKernel sik(u, g);
  rep.unimodular = sik.unimodular(20);
  const SpectralKernel spec(u, g, n_levels);
  enum { Box, Smooth, F2 } fam = F2;
  BoxCase bc = BoxCase::DD;
  double theta = 0.0;
  try {
    bc = box_case_of(u);
    fam = Box;
  } catch (const Error&) {
    if (cls.f3) {
      theta = smooth_theta_of(u);
      fam = Smooth;
    }
  }
  rep.family = fam == Box ? "box" : (fam == Smooth ? "smooth" : "f2");
  for (const KernelQuery& q : points) {
    cplx closed;
    if (fam == Box) closed = box_kernel(bc, g, q);
    else if (fam == Smooth) closed = smooth_kernel(theta, g, q);
    else closed = sik(q);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(closed - spec(q)));
    if (spec.last_term(q.time) > q.truncation_tol * 1e3) rep.truncation_warning = true;
  }
  return rep;
}

CrosscheckReport kernel_crosscheck(const CharacteristicMatrix& u, const Geometry& g,
                                   const KernelQuery& q, int n_levels) {
  return kernel_crosscheck(u, g, std::vector<KernelQuery>{q}, n_levels);
}

}  // namespace qring
