// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qring/error.hpp"
#include "qring/random.hpp"

namespace qring {

namespace {

// Folds (xi, aR, bI) into xi in [0, pi) via (xi + pi, -aR, -bI) ~ (xi, aR, bI).
SpectralTriple fold(double xi, double ar, double bi) {
  double x = std::fmod(xi, 2.0 * kPi);
  if (x < 0) x += 2.0 * kPi;
  if (x >= kPi) {
    x -= kPi;
    ar = -ar;
    bi = -bi;
  }
  if (x >= kPi || x < 0) x = 0.0;
  return {x, ar, bi};
}

SpectralTriple clamp_disk(SpectralTriple t, double slack) {
  const double r = std::hypot(t.alpha_r, t.beta_i);
  if (r > 1.0 + slack) throw Error(Status::OutOfDomain, "recovered triple lies outside the disk (boundary case)");
  if (r > 1.0) {
    t.alpha_r /= r;
    t.beta_i /= r;
  }
  return t;
}

Eigen::VectorXd residual_vector(const SpectrumPrefix& p, const SpectralTriple& t) {
  const Geometry& g = p.geom;
  const std::size_t m = p.positive_k.size() + p.negative_kappa.size() + (p.has_zero_mode ? 1 : 0);
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  Eigen::Index i = 0;
  for (double k : p.positive_k) r(i++) = secular_positive(t, g, k) / (1.0 + k * g.l0);
  for (double kap : p.negative_kappa)
    r(i++) = secular_negative_scaled(t, g, kap) / (1.0 + kap * g.l0);
  if (p.has_zero_mode) r(i++) = secular_positive(t, g, 0.0) / (1.0 + g.l / (2.0 * g.l0));
  return r;
}

struct FitFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const SpectrumPrefix* prefix = nullptr;
  int m = 0;

  int inputs() const { return 3; }
  int values() const { return m; }

  static SpectralTriple map(const Eigen::VectorXd& x) {
    double ar = x(1);
    double bi = x(2);
    const double r = std::hypot(ar, bi);
    if (r > 1.0) {
      ar /= r;
      bi /= r;
    }
    return {x(0), ar, bi};
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    f = residual_vector(*prefix, map(x));
    return 0;
  }
};

bool structure_matches(const SpectrumPrefix& p, const SpectralTriple& t) {
  try {
    if (zero_mode_exists(t, p.geom) != p.has_zero_mode) return false;
    if (negative_levels(t, p.geom).size() != p.negative_kappa.size()) return false;
    // A split doublet keeps every datum a root but adds partners the data lacks.
    const auto pos = positive_levels(t, p.geom, static_cast<int>(p.positive_k.size()));
    if (pos.size() != p.positive_k.size()) return false;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (std::abs(pos[i].wavenumber - p.positive_k[i]) * p.geom.l > 1e-6) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

double lstsq_poly_c1_c3(const std::vector<double>& n, const std::vector<double>& y, double& c1,
                        double& c3) {
  const Eigen::Index m = static_cast<Eigen::Index>(n.size());
  double xmax = 0.0;
  for (double v : n) xmax = std::max(xmax, 1.0 / v);
  Eigen::MatrixXd a(m, 4);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = (1.0 / n[static_cast<std::size_t>(i)]) / xmax;
    a(i, 0) = 1.0;
    a(i, 1) = t * t;
    a(i, 2) = t * t * t;
    a(i, 3) = t * t * t * t;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
  c1 = sol(0);
  c3 = sol(1) / (xmax * xmax);
  return std::sqrt((a * sol - b).squaredNorm() / static_cast<double>(m));
}

}  // namespace

const char* case_name(CaseKind c) {
  switch (c) {
    case CaseKind::I: return "I";
    case CaseKind::II: return "II";
    case CaseKind::III: return "III";
    case CaseKind::Ambiguous: return "ambiguous";
  }
  return "unknown";
}

void SpectrumPrefix::validate() const {
  geom.validate();
  if (positive_k.empty()) throw Error(Status::InvalidArgument, "spectrum prefix has no positive levels");
  for (std::size_t i = 0; i < positive_k.size(); ++i) {
    if (!(positive_k[i] > 0.0) || !std::isfinite(positive_k[i]))
      throw Error(Status::InvalidArgument, "positive wavenumbers must be finite and > 0");
    if (i > 0 && !(positive_k[i] > positive_k[i - 1]))
      throw Error(Status::InvalidArgument, "positive wavenumbers must be strictly increasing");
  }
  if (negative_kappa.size() > 2) throw Error(Status::InvalidArgument, "at most two negative levels");
  for (double k : negative_kappa)
    if (!(k > 0.0) || !std::isfinite(k))
      throw Error(Status::InvalidArgument, "negative-sector kappa must be finite and > 0");
}

SpectrumPrefix prefix_from_spectrum(const Spectrum& sp, const Geometry& g) {
  SpectrumPrefix p;
  p.geom = g;
  for (const Level& lv : sp.levels) {
    switch (lv.sector) {
      case Sector::Positive: p.positive_k.push_back(lv.wavenumber); break;
      case Sector::Zero: p.has_zero_mode = true; break;
      case Sector::Negative: p.negative_kappa.push_back(lv.wavenumber); break;
    }
  }
  return p;
}

CaseLabel case_statistics(const SpectrumPrefix& p, double tol_sin) {
  p.validate();
  const double l = p.geom.l;
  const std::size_t n = p.positive_k.size();
  CaseLabel lab;
  for (double k : p.positive_k) lab.max_abs_sin = std::max(lab.max_abs_sin, std::abs(std::sin(k * l)));

  const std::size_t w = std::max<std::size_t>(1, n / 4);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i = n - w; i < n; ++i) {
    const double c = std::cos(p.positive_k[i] * l);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    sum += c;
  }
  lab.tail_cos_mean = sum / static_cast<double>(w);
  lab.tail_cos_spread = hi - lo;

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = p.positive_k[i];
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, 1) = std::cos(k * l);
    a(r, 2) = std::sin(k * l) / (k * p.geom.l0);
  }
  const Eigen::VectorXd sv = a.jacobiSvd().singularValues();
  lab.model_ii_residual = sv(sv.size() - 1) / sv(0);

  if (lab.max_abs_sin < tol_sin) {
    lab.kind = CaseKind::I;
  } else if (lab.tail_cos_spread < 0.5) {
    lab.kind = lab.model_ii_residual < 1e-6 ? CaseKind::II : CaseKind::Ambiguous;
  } else if (lab.tail_cos_spread > 1.5) {
    lab.kind = CaseKind::III;
  } else {
    lab.kind = CaseKind::Ambiguous;
  }
  return lab;
}

CaseLabel classify_case(const SpectrumPrefix& p, double tol_sin) {
  if (p.positive_k.size() < 16) throw Error(Status::InvalidArgument, "case classification needs N >= 16");
  CaseLabel lab = case_statistics(p, tol_sin);
  if (lab.kind == CaseKind::Ambiguous)
    throw Error(Status::Ambiguous, "tail statistics straddle the case II/III thresholds");
  return lab;
}

SpectralTriple recover_case_I(const SpectrumPrefix& p) {
  p.validate();
  if (p.has_zero_mode && !p.negative_kappa.empty())
    throw Error(Status::Inconsistent, "case I cannot have both a zero mode and a negative level");
  if (p.negative_kappa.size() > 1)
    throw Error(Status::Inconsistent, "case I admits at most one negative level");
  // Doublet lattices: only even (sigma1) or only odd (-sigma1) multiples of pi/l.
  if (p.negative_kappa.empty() && p.positive_k.size() >= 2) {
    bool all_even = true;
    bool all_odd = true;
    for (double k : p.positive_k) {
      const bool even = std::fmod(std::round(k * p.geom.l / kPi), 2.0) == 0.0;
      all_even = all_even && even;
      all_odd = all_odd && !even;
    }
    if (all_even && p.has_zero_mode) return {kPi / 2, 0.0, -1.0};
    if (all_odd && !p.has_zero_mode) return {kPi / 2, 0.0, 1.0};
  }
  if (p.has_zero_mode) return {0.0, 1.0, 0.0};
  if (p.negative_kappa.empty()) return {0.0, -1.0, 0.0};
  const double x = p.negative_kappa[0] * p.geom.l0;
  return {0.0, (1.0 - x * x) / (1.0 + x * x), 0.0};
}

SpectralTriple recover_case_II(const SpectrumPrefix& p) {
  p.validate();
  const double l = p.geom.l;
  const double l0 = p.geom.l0;
  const std::size_t n = p.positive_k.size();
  const CaseLabel lab = case_statistics(p);
  double r = -lab.tail_cos_mean;

  std::size_t probe = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::abs(std::sin(p.positive_k[i] * l));
    if (s > best) {
      best = s;
      probe = i;
    }
  }
  if (best < 1e-9) throw Error(Status::DegenerateTail, "sin kl vanishes at every root");
  const double kp = p.positive_k[probe];
  double t = -(r + std::cos(kp * l)) * kp * l0 / std::sin(kp * l);

  // r + cos kl + t sin kl / (k L0) = 0 holds exactly at every root.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double k = p.positive_k[i];
    const auto row = static_cast<Eigen::Index>(i);
    a(row, 0) = 1.0;
    a(row, 1) = std::sin(k * l) / (k * l0);
    b(row) = -std::cos(k * l);
  }
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() == 2) {
    const Eigen::VectorXd sol = qr.solve(b);
    r = sol(0);
    t = sol(1);
  }
  const double xi = std::atan2(1.0, t);
  SpectralTriple out{xi, -std::cos(xi), r * std::sin(xi)};
  return clamp_disk(out, 1e-6);
}

AsymptoticCoeffs estimate_c_coeffs(const SpectrumPrefix& p, double tol) {
  p.validate();
  if (p.positive_k.size() < 32) throw Error(Status::InvalidArgument, "asymptotic fit needs N >= 32");
  const double l = p.geom.l;
  const std::size_t n = p.positive_k.size();
  std::vector<double> ne, ye, no, yo;
  for (std::size_t i = n / 4; i < n; ++i) {
    const double kl = p.positive_k[i] * l;
    const double m = std::round(kl / kPi);
    if (m < 1.0) continue;
    const double eps = kl - kPi * m;
    const bool even = std::fmod(m, 2.0) == 0.0;
    (even ? ne : no).push_back(m);
    (even ? ye : yo).push_back(m * eps);
  }
  if (ne.size() < 6 || no.size() < 6)
    throw Error(Status::NoisyTail, "too few even or odd roots in the tail for extrapolation");
  AsymptoticCoeffs c;
  const double re = lstsq_poly_c1_c3(ne, ye, c.c1_plus, c.c3_plus);
  const double ro = lstsq_poly_c1_c3(no, yo, c.c1_minus, c.c3_minus);
  c.fit_residual = std::max(re, ro);
  if (c.fit_residual > tol) throw Error(Status::NoisyTail, "extrapolation residual exceeds tolerance");
  c.a1 = -0.5 * kPi * (c.c1_plus - c.c1_minus);
  c.a2 = -0.5 * kPi * (c.c1_plus + c.c1_minus);
  const bool use_plus = std::abs(c.c1_plus) >= std::abs(c.c1_minus);
  const double c1 = use_plus ? c.c1_plus : c.c1_minus;
  const double c3 = use_plus ? c.c3_plus : c.c3_minus;
  if (std::abs(c1) < 1e-14) throw Error(Status::DegenerateTail, "both c1 coefficients vanish");
  c.a3 = kPi * kPi / c1 * (-c3 - c1 * c1 / kPi + c.a2 * c1 * c1 / (2.0 * kPi) + c1 * c1 * c1 / 6.0);
  return c;
}

AsymptoticCoeffs exact_a_coeffs(const SpectrumPrefix& p) {
  p.validate();
  const double l = p.geom.l;
  const std::size_t n = p.positive_k.size();
  if (n < 3) throw Error(Status::InvalidArgument, "need at least three positive levels");
  // Each root obeys sin kl + a1/(kl) + a2 cos(kl)/(kl) + a3 sin(kl)/(kl)^2 = 0.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = p.positive_k[i] * l;
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0 / x;
    a(r, 1) = std::cos(x) / x;
    a(r, 2) = std::sin(x) / (x * x);
    b(r) = -std::sin(x);
  }
  const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
  AsymptoticCoeffs c;
  c.a1 = sol(0);
  c.a2 = sol(1);
  c.a3 = sol(2);
  c.fit_residual = std::sqrt((a * sol - b).squaredNorm() / static_cast<double>(n));
  return c;
}

SpectralTriple recover_case_III(const AsymptoticCoeffs& c, const Geometry& g, double tol) {
  g.validate();
  const double lam = g.l / g.l0;
  if (std::abs(c.a3 + lam * lam) < tol * (1.0 + lam * lam)) {
    if (std::abs(c.a2) < tol) throw Error(Status::DivisionGuard, "a2 vanishes in the cos xi = 0 branch");
    return clamp_disk({kPi / 2, 2.0 * lam / c.a2, c.a1 / c.a2}, 1e-6);
  }
  const double q = c.a3 / (lam * lam);
  double xi = std::atan2(c.a2 / lam, 1.0 + q);
  if (xi < 0) xi += kPi;
  if (xi >= kPi) xi -= kPi;
  const double cx = std::cos(xi);
  const double ar = cx * (1.0 - q) / (1.0 + q);
  const double bi = c.a1 * cx / (lam * (1.0 + q));
  return clamp_disk({xi, ar, bi}, 1e-6);
}

double prefix_residual(const SpectrumPrefix& p, const SpectralTriple& t) {
  const Eigen::VectorXd r = residual_vector(p, t);
  return std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

FitResult fit_parameters(const SpectrumPrefix& p, std::uint64_t seed) {
  p.validate();
  FitFunctor fn;
  fn.prefix = &p;
  fn.m = static_cast<int>(p.positive_k.size() + p.negative_kappa.size() + (p.has_zero_mode ? 1 : 0));
  if (fn.m < 3) throw Error(Status::InvalidArgument, "fit needs at least three data points");

  std::vector<SpectralTriple> starts = {
      {0.0, -1.0, 0.0},        {0.0, 1.0, 0.0},     {0.0, 0.0, 0.0},     {kPi / 2, 0.0, 1.0},
      {kPi / 2, 0.0, -1.0},    {kPi / 2, 0.0, 0.0}, {kPi / 4, 0.0, 0.0}, {3 * kPi / 4, 0.0, 0.0},
  };
  Rng rng(seed);
  while (starts.size() < 32) {
    const double xi = rng.uniform(0.0, kPi);
    const double rad = std::sqrt(rng.uniform());
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    starts.push_back({xi, rad * std::cos(ang), rad * std::sin(ang)});
  }

  struct Cand {
    SpectralTriple t;
    double res;
  };
  std::vector<Cand> cands;
  for (const auto& s : starts) {
    Eigen::VectorXd x(3);
    x << s.xi, s.alpha_r, s.beta_i;
    Eigen::NumericalDiff<FitFunctor, Eigen::Central> nd(fn);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor, Eigen::Central>> lm(nd);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 2000;
    lm.minimize(x);
    const SpectralTriple m = FitFunctor::map(x);
    const SpectralTriple t = fold(m.xi, m.alpha_r, m.beta_i);
    cands.push_back({t, prefix_residual(p, t)});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.res < b.res; });

  FitResult out;
  out.starts = static_cast<int>(starts.size());
  for (const Cand& c : cands) {
    if (c.res > 1e-8) break;
    if (structure_matches(p, c.t)) {
      out.triple = c.t;
      out.residual = c.res;
      return out;
    }
  }
  throw Error(Status::NoConvergence, "no start reached residual 1e-8 with matching nonpositive structure");
}

Recovery recover_parameters(const SpectrumPrefix& p, bool cross_validate, std::uint64_t seed) {
  p.validate();
  if (p.positive_k.size() < 16) throw Error(Status::InvalidArgument, "recovery needs N >= 16 positive levels");
  Recovery rec;
  rec.label = case_statistics(p);
  if (cross_validate) {
    try {
      rec.fit = fit_parameters(p, seed);
    } catch (const Error& e) {
      rec.warnings.push_back(std::string("fit oracle failed: ") + e.what());
    }
  }

  auto run_case = [&](CaseKind k) -> SpectralTriple {
    switch (k) {
      case CaseKind::I: return recover_case_I(p);
      case CaseKind::II: return recover_case_II(p);
      case CaseKind::III: {
        std::optional<AsymptoticCoeffs> asym;
        try {
          asym = estimate_c_coeffs(p);
        } catch (const Error& e) {
          rec.warnings.push_back(std::string("tail extrapolation: ") + e.what());
        }
        AsymptoticCoeffs ex = exact_a_coeffs(p);
        if (asym) {
          ex.c1_plus = asym->c1_plus;
          ex.c1_minus = asym->c1_minus;
          ex.c3_plus = asym->c3_plus;
          ex.c3_minus = asym->c3_minus;
          const double da = std::max({std::abs(asym->a1 - ex.a1), std::abs(asym->a2 - ex.a2),
                                      std::abs(asym->a3 - ex.a3)});
          if (da > 1e-3 * (1.0 + std::abs(ex.a2) + std::abs(ex.a3)))
            rec.warnings.push_back("tail extrapolation differs from the all-root solve");
        }
        return recover_case_III(ex, p.geom);
      }
      default: break;
    }
    throw Error(Status::Ambiguous, "no case to run");
  };

  if (rec.label.kind != CaseKind::Ambiguous) {
    rec.triple = run_case(rec.label.kind);
    rec.resolved = rec.label.kind;
  } else {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (CaseKind k : {CaseKind::II, CaseKind::III}) {
      try {
        const SpectralTriple t = run_case(k);
        const double r = prefix_residual(p, t);
        if (r < best) {
          best = r;
          rec.triple = t;
          rec.resolved = k;
          any = true;
        }
      } catch (const Error&) {
      }
    }
    if (rec.fit && rec.fit->residual < best) {
      rec.triple = rec.fit->triple;
      rec.resolved = CaseKind::Ambiguous;
      any = true;
    }
    if (!any) throw Error(Status::Ambiguous, "neither case II nor case III reconstruction succeeded");
    rec.warnings.push_back("ambiguous case resolved by residual comparison");
  }
  if (rec.fit) {
    rec.disagreement = triple_distance(rec.triple, rec.fit->triple);
    if (rec.disagreement > 1e-3) rec.warnings.push_back("asymptotic and fit recoveries disagree by more than 1e-3");
  }
  return rec;
}

}  // namespace qring
