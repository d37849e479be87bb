// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/twopoint.hpp"

#include <algorithm>
#include <cmath>

#include "qring/error.hpp"
#include "roots.hpp"

namespace qring {

namespace {

Mat4 block_u(const TwoPointSystem& s) {
  Mat4 u = Mat4::Zero();
  u.topLeftCorner<2, 2>() = to_matrix(s.u1);
  u.bottomRightCorner<2, 2>() = to_matrix(s.u2);
  return u;
}

// Boundary rows (Phi1(0), Phi2(0), Phi1(l/2), Phi2(l/2)) for the per-component basis
// (f, g) with values f0, g0 at 0 and fh, gh at l/2; likewise for derivatives.
Mat4 rows(cplx f0, cplx g0, cplx fh, cplx gh) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = f0;
  m(0, 1) = g0;
  m(1, 2) = f0;
  m(1, 3) = g0;
  m(2, 0) = fh;
  m(2, 1) = gh;
  m(3, 2) = fh;
  m(3, 3) = gh;
  return m;
}

// (U - I) V + i L0 (U + I) D with column j divided by
// (|U - I| + |U + I|) sqrt(|V_j|^2 + L0^2 |D_j|^2), which bounds it and never vanishes.
Mat4 assemble(const Mat4& u, const Geometry& g, const Mat4& v, const Mat4& d) {
  const Mat4 id = Mat4::Identity();
  Mat4 m = (u - id) * v + cplx(0.0, g.l0) * (u + id) * d;
  const double w = (u - id).norm() + (u + id).norm();
  for (int j = 0; j < 4; ++j)
    m.col(j) /= w * std::sqrt(v.col(j).squaredNorm() + g.l0 * g.l0 * d.col(j).squaredNorm());
  return m;
}

// Basis (cos kx, sin(kx)/k): regular at k = 0, where it becomes (1, x).
Mat4 regular_positive(const Mat4& u, const Geometry& g, double k) {
  const double h = 0.5 * g.l;
  const double c = std::cos(k * h);
  const double s = k * h < 1e-8 ? h : std::sin(k * h) / k;
  return assemble(u, g, rows(1.0, 0.0, c, s), rows(0.0, 1.0, -k * std::sin(k * h), c));
}

// Basis e^{-kappa l/2} (cosh kappa x, sinh(kappa x)/kappa) for small kappa, and
// (e^{kappa(x - l/2)}, e^{-kappa x}) beyond; the change of basis has positive determinant.
Mat4 regular_negative(const Mat4& u, const Geometry& g, double kappa) {
  const double h = 0.5 * g.l;
  const double e = std::exp(-kappa * h);
  Mat4 v;
  Mat4 d;
  if (kappa * h <= 1.0) {
    const double ch = 0.5 * (1.0 + e * e);
    const double om = -std::expm1(-2.0 * kappa * h);
    const double sh = kappa * h < 1e-8 ? h * e : 0.5 * om / kappa;
    v = rows(e, 0.0, ch, sh);
    d = rows(0.0, e, 0.5 * kappa * om, ch);
  } else {
    v = rows(e, 1.0, 1.0, e);
    d = rows(kappa * e, -kappa, kappa, -kappa * e);
  }
  return assemble(u, g, v, d);
}

// Smallest singular value of the column-scaled matrix; at most one.
double merit4(const Mat4& m) { return m.jacobiSvd().singularValues()(3); }

int nullity4(const Mat4& m, double rel) {
  const auto sv = m.jacobiSvd().singularValues();
  int n = 0;
  for (int i = 0; i < 4; ++i)
    if (sv(i) < rel) ++n;
  return n;
}

// det / sqrt(det U1 det U2) is real.
double real_det(const Mat4& m, cplx phase) { return (m.determinant() * phase).real(); }

Level level_of(Sector s, double w, int mult, bool tangential) {
  Level lv;
  lv.sector = s;
  lv.wavenumber = w;
  lv.energy = s == Sector::Positive ? w * w : (s == Sector::Negative ? -w * w : 0.0);
  lv.multiplicity = mult;
  lv.near_double = tangential && mult == 1;
  return lv;
}

}  // namespace

BlockSecular block_secular(const TwoPointSystem& sys, double k) {
  sys.geom.validate();
  BlockSecular b;
  b.k = k;
  const cplx e = std::polar(1.0, 0.5 * k * sys.geom.l);
  b.t = rows(1.0, 1.0, e, std::conj(e));
  b.sigma3 = Mat4::Zero();
  b.sigma3.diagonal() << 1.0, -1.0, 1.0, -1.0;
  b.u_block = block_u(sys);
  const Mat4 id = Mat4::Identity();
  b.m = (b.u_block - id) * b.t - (k * sys.geom.l0) * (b.u_block + id) * b.t * b.sigma3;
  const auto sv = b.m.jacobiSvd().singularValues();
  b.merit = sv(0) > 0.0 ? sv(3) / sv(0) : 0.0;
  return b;
}

Spectrum spectrum2(const TwoPointSystem& sys, int count, const SpectralOptions& opt) {
  const Geometry& g = sys.geom;
  g.validate();
  if (count < 1) throw Error(Status::InvalidArgument, "count must be >= 1");
  const Mat4 u = block_u(sys);
  const Mat2 u1 = to_matrix(sys.u1);
  const Mat2 u2 = to_matrix(sys.u2);
  const cplx phase = std::conj(std::sqrt(u1.determinant()) * std::sqrt(u2.determinant()));
  detail::ScanSettings ss{opt.merit_tol, opt.candidate_tol, 1e-10 / g.l};

  Spectrum sp;
  const Mat4 m0 = regular_positive(u, g, 0.0);
  const int zero_mult = nullity4(m0, opt.rank_tol);
  const bool zero = zero_mult > 0;

  // Negative sector: beyond every local bound state the sign is fixed.
  double kmax = std::max(10.0 / g.l, 10.0 / g.l0);
  for (const Mat2* um : {&u1, &u2}) {
    for (const cplx ev : Eigen::ComplexEigenSolver<Mat2>(*um).eigenvalues()) {
      const double half = 0.5 * std::arg(ev);
      // Local bound state at kappa = |tan(phi/2)| / L0; phi = pi is a Dirichlet wall.
      if (std::abs(std::cos(half)) > 1e-12)
        kmax = std::max(kmax, 4.0 * std::abs(std::tan(half)) / g.l0);
    }
  }
  kmax = std::min(kmax, 1e12 / g.l0);
  {
    const double inv_len = std::max(1.0 / g.l, 1.0 / g.l0);
    const double h = std::min(kPi / g.l, 1.0 / g.l0) / (2.0 * opt.grid_per_pi);
    const double k_uniform = std::min(kmax, 64.0 * inv_len);
    std::vector<double> grid;
    if (!zero) grid.push_back(0.0);
    for (double k = 0.5 * h; k <= k_uniform; k += h) grid.push_back(k);
    for (double k = grid.back() * 1.01; k < kmax * 1.01; k *= 1.01) grid.push_back(k);
    auto f = [&](double k) { return real_det(regular_negative(u, g, k), phase); };
    auto merit = [&](double k) { return merit4(regular_negative(u, g, k)); };
    std::vector<Level> neg;
    for (const auto& r : detail::scan_roots(f, merit, grid, ss)) {
      if (!(r.x * g.l >= 1e-6)) continue;
      const int mult = std::max(1, nullity4(regular_negative(u, g, r.x), opt.rank_tol));
      neg.push_back(level_of(Sector::Negative, r.x, mult, r.tangential));
    }
    std::sort(neg.begin(), neg.end(),
              [](const Level& a, const Level& b) { return a.wavenumber > b.wavenumber; });
    sp.levels = neg;
  }
  if (zero) sp.levels.push_back(level_of(Sector::Zero, 0.0, zero_mult, false));

  const double h = kPi / (2.0 * opt.grid_per_pi * g.l);
  auto f = [&](double k) { return real_det(regular_positive(u, g, k), phase); };
  auto merit = [&](double k) { return merit4(regular_positive(u, g, k)); };
  const double cap = (count + 8) * 4.0 * kPi / g.l;
  double k_end = (count + 4) * kPi / g.l;
  for (;;) {
    std::vector<double> grid;
    if (!zero) grid.push_back(0.0);
    for (double k = 0.5 * h; k <= k_end; k += h) grid.push_back(k);
    std::vector<Level> pos;
    for (const auto& r : detail::scan_roots(f, merit, grid, ss)) {
      if (!(r.x * g.l >= 1e-6)) continue;
      if (r.x > k_end - 2.0 * h) break;
      const int mult = std::max(1, nullity4(regular_positive(u, g, r.x), opt.rank_tol));
      pos.push_back(level_of(Sector::Positive, r.x, mult, r.tangential));
      if (static_cast<int>(pos.size()) == count) break;
    }
    if (static_cast<int>(pos.size()) == count) {
      for (const Level& lv : pos) sp.levels.push_back(lv);
      return sp;
    }
    if (k_end >= cap)
      throw Error(Status::ScanExhausted, "fewer positive roots than requested below the scan cap");
    k_end = std::min(cap, k_end + 8.0 * kPi / g.l);
  }
}

TwoPointSystem conjugate_pair(const TwoPointSystem& sys, const Mat2& v, double tol) {
  if (unitarity_defect(v) > tol || std::abs(v.determinant() - 1.0) > tol)
    throw Error(Status::NotSpecialUnitary, "conjugating matrix must lie in SU(2)");
  TwoPointSystem out = sys;
  out.u1 = from_matrix(v * to_matrix(sys.u1) * v.adjoint());
  out.u2 = from_matrix(v * to_matrix(sys.u2) * v.adjoint());
  return out;
}

Diagonalization diagonalize_u(const CharacteristicMatrix& u) {
  // U = e^{i xi} (aR I + i n.sigma), n = (bI, bR, aI).
  const double n1 = u.beta.imag();
  const double n2 = u.beta.real();
  const double n3 = u.alpha.imag();
  const double nn = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
  auto wrap = [](double t) {
    double x = std::remainder(t, 2.0 * kPi);
    if (x <= -kPi) x += 2.0 * kPi;
    return x;
  };
  Diagonalization d;
  if (nn < 1e-15) {
    d.v = Mat2::Identity();
    d.theta_plus = d.theta_minus = wrap(std::arg(to_matrix(u)(0, 0)));
    return d;
  }
  const Mat2 h = n1 * pauli1() + n2 * pauli2() + n3 * pauli3();
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  const double eta = std::atan2(nn, u.alpha.real());
  // Ascending eigenvalues: column 0 belongs to -|n|, column 1 to +|n|.
  double tp = wrap(u.xi + eta);
  double tm = wrap(u.xi - eta);
  Eigen::Vector2cd ep = es.eigenvectors().col(1);
  Eigen::Vector2cd em = es.eigenvectors().col(0);
  if (tp < tm) {
    std::swap(tp, tm);
    std::swap(ep, em);
  }
  Mat2 v;
  v.row(0) = ep.adjoint();
  v.row(1) = em.adjoint();
  const cplx det = v.determinant();
  v.row(1) *= std::conj(det) / std::abs(det);
  d.v = v;
  d.theta_plus = tp;
  d.theta_minus = tm;
  return d;
}

IsospectralGroup isospectral_group_of(const CharacteristicMatrix& u2, double tol) {
  IsospectralGroup g;
  const Mat2 m = to_matrix(u2);
  if (std::abs(m(0, 1)) < tol && std::abs(m(1, 0)) < tol && std::abs(m(0, 0) - m(1, 1)) < tol) {
    g.full_su2 = true;
    return g;
  }
  double n[3] = {u2.beta.imag(), u2.beta.real(), u2.alpha.imag()};
  const double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (double& x : n) x /= nn;
  for (double x : n) {
    if (std::abs(x) > 1e-14) {
      if (x < 0)
        for (double& y : n) y = -y;
      break;
    }
  }
  g.axis = n[0] * pauli1() + n[1] * pauli2() + n[2] * pauli3();
  return g;
}

DoubledSamples doubled_state(const std::vector<cplx>& psi) {
  const std::size_t n = psi.size();
  if (n == 0 || n % 2 != 0) throw Error(Status::InvalidArgument, "sample count must be even and positive");
  DoubledSamples d;
  for (std::size_t j = 0; j <= n / 2; ++j) {
    d.first.push_back(psi[j]);
    d.second.push_back(psi[(n - j) % n]);
  }
  return d;
}

std::vector<cplx> undoubled_state(const DoubledSamples& phi) {
  const std::size_t h = phi.first.size();
  if (h < 2 || phi.second.size() != h) throw Error(Status::InvalidArgument, "mismatched doubled samples");
  const std::size_t n = 2 * (h - 1);
  std::vector<cplx> psi(n);
  for (std::size_t j = 0; j < h; ++j) psi[j] = phi.first[j];
  for (std::size_t j = 1; j + 1 < h; ++j) psi[n - j] = phi.second[j];
  return psi;
}

}  // namespace qring
