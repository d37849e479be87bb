// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qring/error.hpp"
#include "roots.hpp"

namespace qring {

namespace {

struct Coeffs {
  double s, c, d, bi;
};

Coeffs coeffs_of(const SpectralTriple& t) {
  const double cx = std::cos(t.xi);
  return {std::sin(t.xi), cx + t.alpha_r, cx - t.alpha_r, t.beta_i};
}

// sin(x)/x and its derivative, with series near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinc_prime(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return -x / 3.0 + x * x2 / 30.0;
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

int nullity(const SecularMatrix& m, double rel) {
  const auto [smax, smin] = detail::singular_values2(m.entries);
  const double thr = rel * m.scale;
  return (smin < thr ? 1 : 0) + (smax < thr ? 1 : 0);
}

double merit_of(const SecularMatrix& m) {
  return detail::singular_values2(m.entries).second / std::max(m.scale, 1e-300);
}

Level make_level(Sector s, double w, int mult, bool tangential) {
  Level lv;
  lv.sector = s;
  lv.wavenumber = w;
  lv.energy = s == Sector::Positive ? w * w : (s == Sector::Negative ? -w * w : 0.0);
  lv.multiplicity = mult;
  lv.near_double = tangential && mult == 1;
  return lv;
}

Mat2 unit_mat() { return Mat2::Identity(); }

}  // namespace

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::Negative: return "negative";
    case Sector::Zero: return "zero";
    case Sector::Positive: return "positive";
  }
  return "unknown";
}

double secular_positive(const SpectralTriple& t, const Geometry& g, double k) {
  const Coeffs q = coeffs_of(t);
  const double x = k * g.l;
  const double kl0 = k * g.l0;
  const double sfac = g.l / (2.0 * g.l0) * sinc(x);
  return q.bi + q.s * std::cos(x) + (q.d + q.c * kl0 * kl0) * sfac;
}

double secular_positive_derivative(const SpectralTriple& t, const Geometry& g, double k) {
  const Coeffs q = coeffs_of(t);
  const double x = k * g.l;
  const double kl0 = k * g.l0;
  const double sfac = g.l / (2.0 * g.l0) * sinc(x);
  const double dsfac = g.l * g.l / (2.0 * g.l0) * sinc_prime(x);
  return -q.s * g.l * std::sin(x) + 2.0 * q.c * k * g.l0 * g.l0 * sfac +
         (q.d + q.c * kl0 * kl0) * dsfac;
}

double secular_negative(const SpectralTriple& t, const Geometry& g, double kappa) {
  const Coeffs q = coeffs_of(t);
  const double x = kappa * g.l;
  const double kl0 = kappa * g.l0;
  const double shfac = x < 1e-4 ? g.l / (2.0 * g.l0) * (1.0 + x * x / 6.0)
                                : std::sinh(x) / (2.0 * kl0);
  return q.bi + q.s * std::cosh(x) + (q.d - q.c * kl0 * kl0) * shfac;
}

double secular_negative_scaled(const SpectralTriple& t, const Geometry& g, double kappa) {
  const Coeffs q = coeffs_of(t);
  const double x = kappa * g.l;
  if (x < 1e-300) return secular_positive(t, g, 0.0);
  const double e1 = std::exp(-x);
  const double e2 = e1 * e1;
  const double one_minus_e2 = -std::expm1(-2.0 * x);
  const double kl0 = kappa * g.l0;
  const double qq = q.d / (4.0 * kl0) - q.c * kl0 / 4.0;
  return q.bi * e1 + 0.5 * q.s * (1.0 + e2) + one_minus_e2 * qq;
}

bool zero_mode_exists(const SpectralTriple& t, const Geometry& g, double tol) {
  return std::abs(secular_positive(t, g, 0.0)) < tol * (1.0 + g.l / (2.0 * g.l0));
}

namespace {

// Bound on both parts from the factor norms; stays positive where the parts vanish together.
double factor_scale(const Mat2& u, double left, double right) {
  return (u - unit_mat()).norm() * left + (u + unit_mat()).norm() * right;
}

}  // namespace

SecularMatrix secular_matrix(const Mat2& u, const Geometry& g, double k) {
  const cplx e = std::polar(1.0, k * g.l);
  Mat2 tau;
  tau << 1.0, 1.0, e, std::conj(e);
  const Mat2 s3 = pauli3();
  const Mat2 p = (u - unit_mat()) * tau;
  const Mat2 q = (k * g.l0) * (u + unit_mat()) * s3 * tau * s3;
  return {k, p - q, factor_scale(u, tau.norm(), k * g.l0 * tau.norm())};
}

SecularMatrix negative_matrix(const Mat2& u, const Geometry& g, double kappa) {
  const double e = std::exp(-kappa * g.l);
  Mat2 tau;
  tau << e, 1.0, 1.0, e;
  const Mat2 s3 = pauli3();
  const Mat2 p = (u - unit_mat()) * tau;
  const Mat2 q = cplx(0.0, kappa * g.l0) * (u + unit_mat()) * s3 * tau * s3;
  return {kappa, p + q, factor_scale(u, tau.norm(), kappa * g.l0 * tau.norm())};
}

SecularMatrix zero_matrix(const Mat2& u, const Geometry& g) {
  Mat2 t0;
  t0 << 1.0, 0.0, 1.0, g.l;
  Mat2 d0;
  d0 << 0.0, 1.0, 0.0, -1.0;
  const Mat2 p = (u - unit_mat()) * t0;
  const Mat2 q = cplx(0.0, g.l0) * (u + unit_mat()) * d0;
  return {0.0, p + q, factor_scale(u, t0.norm(), g.l0 * d0.norm())};
}

std::vector<Level> positive_levels(const SpectralTriple& t, const Geometry& g, int count,
                                   const SpectralOptions& opt) {
  g.validate();
  if (count < 1) throw Error(Status::InvalidArgument, "count must be >= 1");
  const Mat2 u = to_matrix(canonical_matrix(t));
  const bool zero = zero_mode_exists(t, g, opt.zero_tol);
  const double h = kPi / (opt.grid_per_pi * g.l);
  auto f = [&](double k) { return secular_positive(t, g, k) / (1.0 + k * g.l0); };
  auto merit = [&](double k) { return merit_of(secular_matrix(u, g, k)); };
  detail::ScanSettings ss{opt.merit_tol, opt.candidate_tol, 1e-10 / g.l};

  const double cap = (count + 8) * 4.0 * kPi / g.l;
  double k_end = (count + 4) * kPi / g.l;
  for (;;) {
    std::vector<double> grid;
    if (!zero) grid.push_back(0.0);
    for (double k = 0.5 * h; k <= k_end; k += h) grid.push_back(k);
    const auto roots = detail::scan_roots(f, merit, grid, ss);
    std::vector<Level> out;
    for (const auto& r : roots) {
      if (!(r.x * g.l >= 1e-6)) continue;
      if (r.x > k_end - 2.0 * h) break;
      const int mult = std::max(1, nullity(secular_matrix(u, g, r.x), opt.rank_tol));
      out.push_back(make_level(Sector::Positive, r.x, mult, r.tangential));
      if (static_cast<int>(out.size()) == count) return out;
    }
    if (k_end >= cap)
      throw Error(Status::ScanExhausted, "fewer positive roots than requested below the scan cap");
    k_end = std::min(cap, k_end + 8.0 * kPi / g.l);
  }
}

std::vector<Level> negative_levels(const SpectralTriple& t, const Geometry& g,
                                   const SpectralOptions& opt) {
  g.validate();
  const Coeffs q = coeffs_of(t);
  const Mat2 u = to_matrix(canonical_matrix(t));
  const bool zero = zero_mode_exists(t, g, opt.zero_tol);

  // Past kappa_max one term dominates and fixes the sign.
  double kmax = std::max(10.0 / g.l0, 10.0 / g.l);
  const bool c_zero = std::abs(q.c) < 1e-14;
  for (int it = 0; it < 2000; ++it) {
    const double x = kmax * g.l;
    const double om = -std::expm1(-2.0 * x);
    const double tail = std::abs(q.bi) * std::exp(-x) + om * std::abs(q.d) / (4.0 * kmax * g.l0);
    bool done;
    if (!c_zero) {
      done = std::abs(q.c) * kmax * g.l0 * om / 4.0 > tail + std::abs(q.s);
    } else {
      done = std::abs(q.s) < 1e-14 || 0.5 * std::abs(q.s) > tail;
    }
    if (done) break;
    kmax *= 2.0;
  }

  const double inv_len = std::max(1.0 / g.l, 1.0 / g.l0);
  const double h = std::min(kPi / g.l, 1.0 / g.l0) / opt.grid_per_pi;
  const double k_uniform = std::min(kmax, 64.0 * inv_len);
  std::vector<double> grid;
  if (!zero) grid.push_back(0.0);
  for (double k = 0.5 * h; k <= k_uniform; k += h) grid.push_back(k);
  for (double k = grid.back() * 1.01; k < kmax * 1.01; k *= 1.01) grid.push_back(k);
  grid.push_back(kmax * 1.02);

  auto f = [&](double k) { return secular_negative_scaled(t, g, k) / (1.0 + k * g.l0); };
  auto merit = [&](double k) { return merit_of(negative_matrix(u, g, k)); };
  detail::ScanSettings ss{opt.merit_tol, opt.candidate_tol, 1e-10 / g.l};
  const auto roots = detail::scan_roots(f, merit, grid, ss);

  std::vector<Level> out;
  int total = 0;
  for (const auto& r : roots) {
    // k -> 0 is the zero sector; both bases degenerate there.
    if (!(r.x * g.l >= 1e-6)) continue;
    const int mult = std::max(1, nullity(negative_matrix(u, g, r.x), opt.rank_tol));
    out.push_back(make_level(Sector::Negative, r.x, mult, r.tangential));
    total += mult;
  }
  if (total > 2) throw Error(Status::InternalInvariant, "more than two negative levels found");
  // Ascending energy means descending kappa.
  std::sort(out.begin(), out.end(),
            [](const Level& a, const Level& b) { return a.wavenumber > b.wavenumber; });
  return out;
}

Spectrum full_spectrum(const SpectralTriple& t, const Geometry& g, int count,
                       const SpectralOptions& opt) {
  Spectrum sp;
  sp.triple = t;
  sp.levels = negative_levels(t, g, opt);
  if (zero_mode_exists(t, g, opt.zero_tol)) {
    const Mat2 u = to_matrix(canonical_matrix(t));
    const int mult = std::max(1, nullity(zero_matrix(u, g), opt.rank_tol));
    sp.levels.push_back(make_level(Sector::Zero, 0.0, mult, false));
  }
  for (const Level& lv : positive_levels(t, g, count, opt)) sp.levels.push_back(lv);
  return sp;
}

Spectrum full_spectrum(const CharacteristicMatrix& u, const Geometry& g, int count,
                       const SpectralOptions& opt) {
  return full_spectrum(spectral_triple(snap_to_locus(u)), g, count, opt);
}

DegeneracyReport degeneracy_at(const CharacteristicMatrix& u, const Geometry& g, double tol) {
  g.validate();
  DegeneracyReport rep;
  const CharacteristicMatrix v = snap_to_locus(u, tol);
  rep.locus = std::abs(v.alpha.imag()) < tol && std::abs(v.beta.real()) < tol &&
              std::abs(v.beta.imag()) >= tol;
  if (!rep.locus) return rep;
  const SubfamilyReport cls = classify(v, g, tol);
  if (cls.susy_plus || cls.susy_minus) {
    rep.full_doublets = true;
    return rep;
  }
  const Coeffs q = coeffs_of(spectral_triple(v));
  const double check = 1e-8;
  const Mat2 um = to_matrix(v);

  if (std::abs(q.c) > tol && q.d / q.c > 0.0) {
    const double k = std::sqrt(q.d / q.c) / g.l0;
    const double x = k * g.l;
    if (std::abs(std::cos(x) + q.s / q.bi) < check &&
        std::abs(std::sin(x) + q.c * k * g.l0 / q.bi) < check)
      rep.levels.push_back(make_level(Sector::Positive, k, 2, false));
  }
  const SecularMatrix z = zero_matrix(um, g);
  if (z.entries.cwiseAbs().maxCoeff() < check * z.scale)
    rep.levels.push_back(make_level(Sector::Zero, 0.0, 2, false));
  if (std::abs(q.c) > tol && -q.d / q.c > 0.0) {
    const double kappa = std::sqrt(-q.d / q.c) / g.l0;
    const double x = kappa * g.l;
    // Compare in the scaled form e^{-x}(...) to stay finite.
    const double e1 = std::exp(-x);
    const double ch = 0.5 * (1.0 + e1 * e1);
    const double sh = 0.5 * (-std::expm1(-2.0 * x));
    if (std::abs(q.bi * ch + q.s * e1) < check &&
        std::abs(q.bi * sh + q.c * kappa * g.l0 * e1) < check)
      rep.levels.push_back(make_level(Sector::Negative, kappa, 2, false));
  }
  std::sort(rep.levels.begin(), rep.levels.end(),
            [](const Level& a, const Level& b) { return a.energy < b.energy; });
  return rep;
}

Eigenfunction::Eigenfunction(Sector s, double wavenumber, const Geometry& g, cplx c0, cplx c1)
    : sector_(s), k_(wavenumber), l_(g.l), c0_(c0), c1_(c1) {}

cplx Eigenfunction::a() const {
  return sector_ == Sector::Negative ? c0_ * std::exp(-k_ * l_) : c0_;
}

cplx Eigenfunction::value(double x) const {
  switch (sector_) {
    case Sector::Positive:
      return c0_ * std::polar(1.0, k_ * x) + c1_ * std::polar(1.0, -k_ * x);
    case Sector::Negative:
      return c0_ * std::exp(k_ * (x - l_)) + c1_ * std::exp(-k_ * x);
    case Sector::Zero:
      return c0_ + c1_ * x;
  }
  return 0.0;
}

cplx Eigenfunction::derivative(double x) const {
  switch (sector_) {
    case Sector::Positive:
      return cplx(0.0, k_) * (c0_ * std::polar(1.0, k_ * x) - c1_ * std::polar(1.0, -k_ * x));
    case Sector::Negative:
      return k_ * (c0_ * std::exp(k_ * (x - l_)) - c1_ * std::exp(-k_ * x));
    case Sector::Zero:
      return c1_;
  }
  return 0.0;
}

Eigen::Vector2cd Eigenfunction::boundary_values() const { return {value(0.0), value(l_)}; }

Eigen::Vector2cd Eigenfunction::boundary_derivatives() const {
  return {derivative(0.0), -derivative(l_)};
}

Eigen::Matrix2cd gram_matrix(Sector s, double k, const Geometry& g) {
  const double l = g.l;
  Eigen::Matrix2cd m;
  switch (s) {
    case Sector::Positive: {
      const cplx off = l * std::polar(1.0, -k * l) * sinc(k * l);
      m << l, off, std::conj(off), l;
      break;
    }
    case Sector::Negative: {
      const double diag = k * l < 1e-8 ? l : -std::expm1(-2.0 * k * l) / (2.0 * k);
      const double off = l * std::exp(-k * l);
      m << diag, off, off, diag;
      break;
    }
    case Sector::Zero:
      m << l, l * l / 2.0, l * l / 2.0, l * l * l / 3.0;
      break;
  }
  return m;
}

double bc_residual(const Mat2& u, const Geometry& g, const Eigenfunction& f) {
  const Eigen::Vector2cd r = (u - unit_mat()) * f.boundary_values() +
                             cplx(0.0, g.l0) * (u + unit_mat()) * f.boundary_derivatives();
  return r.norm();
}

std::vector<Eigenfunction> eigenfunction(const CharacteristicMatrix& u0, const Geometry& g,
                                         const Level& level, const SpectralOptions& opt) {
  g.validate();
  const Mat2 u = to_matrix(snap_to_locus(u0));
  SecularMatrix sm;
  switch (level.sector) {
    case Sector::Positive: sm = secular_matrix(u, g, level.wavenumber); break;
    case Sector::Negative: sm = negative_matrix(u, g, level.wavenumber); break;
    case Sector::Zero: sm = zero_matrix(u, g); break;
  }
  Eigen::JacobiSVD<Mat2> svd(sm.entries, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  int nul = 0;
  for (int i = 0; i < 2; ++i)
    if (sv(i) < opt.rank_tol * sm.scale) ++nul;
  if (nul != level.multiplicity)
    throw Error(Status::RankMismatch, "null space dimension differs from level multiplicity");

  const Eigen::Matrix2cd gm = gram_matrix(level.sector, level.wavenumber, g);
  auto inner = [&](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
    return (a.adjoint() * gm * b)(0, 0);
  };
  std::vector<Eigen::Vector2cd> basis;
  for (int j = 2 - nul; j < 2; ++j) {
    Eigen::Vector2cd v = svd.matrixV().col(j);
    for (const auto& b : basis) v -= inner(b, v) * b;
    v /= std::sqrt(std::abs(inner(v, v)));
    basis.push_back(v);
  }
  std::vector<Eigenfunction> out;
  for (const auto& v : basis) {
    // Fix the global phase: largest coefficient real positive.
    const int idx = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    const cplx ph = std::abs(v(idx)) > 0 ? std::conj(v(idx)) / std::abs(v(idx)) : 1.0;
    out.emplace_back(level.sector, level.wavenumber, g, v(0) * ph, v(1) * ph);
  }
  return out;
}

double probability_current(const Eigenfunction& f, double x) {
  return (std::conj(f.value(x)) * f.derivative(x)).imag();
}

SusyReport verify_susy_pairing(const CharacteristicMatrix& u, const Geometry& g, int n_levels) {
  const SubfamilyReport cls = classify(u, g);
  if (!cls.susy_plus && !cls.susy_minus)
    throw Error(Status::NotSusyCase, "supersymmetric pairing needs U = sigma1 or U = -sigma1");
  const double eps = cls.susy_plus ? 1.0 : -1.0;
  SusyReport rep;
  rep.zero_mode_derivative_norm = std::numeric_limits<double>::quiet_NaN();
  const Spectrum sp = full_spectrum(u, g, n_levels);
  bool all_doublets = true;
  for (const Level& lv : sp.levels) {
    const auto fns = eigenfunction(u, g, lv);
    if (lv.sector == Sector::Zero) {
      // psi' = B, so ||psi'|| = |B| sqrt(l).
      double nrm = 0.0;
      for (const auto& f : fns) nrm = std::max(nrm, std::abs(f.b()) * std::sqrt(g.l));
      rep.zero_mode_derivative_norm = nrm;
      rep.zero_mode_annihilated = nrm < 1e-10;
      continue;
    }
    if (lv.sector != Sector::Positive) continue;
    if (lv.multiplicity != 2) all_doublets = false;
    const double k = lv.wavenumber;
    const Eigen::Matrix2cd gm = gram_matrix(Sector::Positive, k, g);
    for (const auto& f : fns) {
      // Q acts as d/dx; divide by k to keep unit scale.
      const Eigen::Vector2cd c = f.coefficients();
      const Eigenfunction q(Sector::Positive, k, g, cplx(0.0, 1.0) * c(0), cplx(0.0, -1.0) * c(1));
      const double bc = std::max(std::abs(q.value(g.l) - eps * q.value(0.0)),
                                 std::abs(q.derivative(g.l) - eps * q.derivative(0.0)) / k);
      rep.max_bc_residual = std::max(rep.max_bc_residual, bc);
      Eigen::Vector2cd rest = q.coefficients();
      for (const auto& b : fns) {
        const Eigen::Vector2cd bc2 = b.coefficients();
        rest -= (bc2.adjoint() * gm * q.coefficients())(0, 0) * bc2;
      }
      rep.max_span_residual =
          std::max(rep.max_span_residual, std::sqrt(std::abs((rest.adjoint() * gm * rest)(0, 0))));
      // -q'' = k^2 q on the coefficient level: (ik)^2 c = -k^2 c.
      const Eigen::Vector2cd qc = q.coefficients();
      const Eigen::Vector2cd hq = -(cplx(0.0, k) * cplx(0.0, k)) * qc;
      const cplx rq = (qc.adjoint() * gm * hq)(0, 0) / (qc.adjoint() * gm * qc)(0, 0);
      rep.max_energy_residual = std::max(rep.max_energy_residual, std::abs(rq - k * k) / (k * k));
    }
    ++rep.doublets_checked;
  }
  rep.passed = all_doublets && rep.doublets_checked == n_levels && rep.max_bc_residual < 1e-8 &&
               rep.max_span_residual < 1e-8 && rep.max_energy_residual < 1e-8 &&
               (!cls.susy_plus || rep.zero_mode_annihilated);
  return rep;
}

ScaleIndependenceReport scale_independence_report(const CharacteristicMatrix& u,
                                                  const Geometry& g, int n_levels) {
  ScaleIndependenceReport rep;
  const Mat2 um = to_matrix(snap_to_locus(u));
  const Mat2 s3 = pauli3();
  const Spectrum sp = full_spectrum(u, g, n_levels);
  for (const Level& lv : sp.levels) {
    if (lv.sector != Sector::Positive) continue;
    const double k = lv.wavenumber;
    const cplx e = std::polar(1.0, k * g.l);
    Mat2 tau;
    tau << 1.0, 1.0, e, std::conj(e);
    const Mat2 dtau = s3 * tau * s3;
    for (const auto& f : eigenfunction(u, g, lv)) {
      const Eigen::Vector2cd v = f.coefficients();
      const double r1 = ((um - unit_mat()) * tau * v).norm() / (2.0 * tau.norm() * v.norm());
      const double r2 = ((um + unit_mat()) * dtau * v).norm() / (2.0 * dtau.norm() * v.norm());
      rep.max_residual = std::max({rep.max_residual, r1, r2});
    }
    ++rep.levels_checked;
  }
  rep.independent = rep.max_residual < 1e-8;
  return rep;
}

bool scale_independence_check(const CharacteristicMatrix& u, const Geometry& g, int n_levels) {
  return scale_independence_report(u, g, n_levels).independent;
}

}  // namespace qring
