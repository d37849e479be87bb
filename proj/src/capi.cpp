// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "qring/qring.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "qring/error.hpp"
#include "qring/inverse.hpp"
#include "qring/kernels.hpp"
#include "qring/random.hpp"
#include "qring/spectrum.hpp"
#include "qring/twopoint.hpp"
#include "qring/u2.hpp"

struct qring_spectrum {
  qring::Spectrum sp;
};

struct qring_prefix {
  qring::SpectrumPrefix p;
};

struct qring_kernel {
  qring_kernel_family family;
  qring::CharacteristicMatrix u;
  qring::Geometry g;
  qring::BoxCase box = qring::BoxCase::DD;
  double theta = 0.0;
  std::unique_ptr<qring::ScaleInvariantKernel> images;
  std::unique_ptr<qring::SpectralKernel> spectral;
};

namespace {

thread_local std::string last_error;
thread_local std::vector<std::string> invert_warnings;

template <class F>
qring_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return QRING_OK;
  } catch (const qring::Error& e) {
    last_error = e.what();
    return static_cast<qring_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return QRING_UNKNOWN_ERROR;
}

void require(bool ok, const char* what) {
  if (!ok) throw qring::Error(qring::Status::InvalidArgument, what);
}

qring::cplx in(qring_complex z) { return {z.re, z.im}; }
qring_complex out(qring::cplx z) { return {z.real(), z.imag()}; }

qring::CharacteristicMatrix in(const qring_u2* u) {
  require(u != nullptr, "null matrix argument");
  qring::CharacteristicMatrix m;
  m.xi = u->xi;
  m.alpha = in(u->alpha);
  m.beta = in(u->beta);
  m.validate(1e-10);
  return m;
}

qring_u2 out(const qring::CharacteristicMatrix& m) { return {m.xi, out(m.alpha), out(m.beta)}; }

qring::Mat2 in(const qring_complex m[4]) {
  require(m != nullptr, "null matrix argument");
  qring::Mat2 r;
  r << in(m[0]), in(m[1]), in(m[2]), in(m[3]);
  return r;
}

void out(const qring::Mat2& m, qring_complex r[4]) {
  r[0] = out(m(0, 0));
  r[1] = out(m(0, 1));
  r[2] = out(m(1, 0));
  r[3] = out(m(1, 1));
}

qring::Geometry in(const qring_geometry* g) {
  require(g != nullptr, "null geometry");
  qring::Geometry r{g->l, g->l0};
  r.validate();
  return r;
}

qring::SpectralTriple in(const qring_triple* t) {
  require(t != nullptr, "null triple");
  return {t->xi, t->alpha_r, t->beta_i};
}

qring_triple out(const qring::SpectralTriple& t) { return {t.xi, t.alpha_r, t.beta_i}; }

qring::SpectralOptions in(const qring_options* o) {
  qring::SpectralOptions r;
  if (o == nullptr) return r;
  if (o->rank_tol > 0.0) r.rank_tol = o->rank_tol;
  if (o->merit_tol > 0.0) r.merit_tol = o->merit_tol;
  if (o->grid_per_pi > 0) r.grid_per_pi = o->grid_per_pi;
  return r;
}

qring_case out(qring::CaseKind c) {
  switch (c) {
    case qring::CaseKind::I: return QRING_CASE_I;
    case qring::CaseKind::II: return QRING_CASE_II;
    case qring::CaseKind::III: return QRING_CASE_III;
    default: return QRING_CASE_AMBIGUOUS;
  }
}

using Unary = qring::CharacteristicMatrix (*)(const qring::CharacteristicMatrix&);

qring_status map_u2(const qring_u2* u, qring_u2* r, Unary f) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = out(f(in(u)));
  });
}

}  // namespace

extern "C" {

const char* qring_version(void) { return "0.1.0"; }

const char* qring_status_string(qring_status s) {
  if (s == QRING_UNKNOWN_ERROR) return "UnknownError";
  if (s < QRING_OK || s > QRING_NOT_SPECIAL_UNITARY) return "InvalidStatus";
  return qring::status_name(static_cast<qring::Status>(s));
}

const char* qring_last_error(void) { return last_error.c_str(); }

qring_status qring_u2_from_matrix(const qring_complex m[4], qring_u2* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = out(qring::from_matrix(in(m)));
  });
}

qring_status qring_u2_to_matrix(const qring_u2* u, qring_complex r[4]) {
  return guarded([&] {
    require(r != nullptr, "null output");
    out(qring::to_matrix(in(u)), r);
  });
}

qring_status qring_u2_triple(const qring_u2* u, qring_triple* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = out(qring::spectral_triple(in(u)));
  });
}

qring_status qring_u2_canonical(const qring_triple* t, qring_u2* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    const qring::SpectralTriple tr = in(t);
    tr.validate(1e-10);
    *r = out(qring::canonical_matrix(tr));
  });
}

qring_status qring_u2_parity(const qring_u2* u, qring_u2* r) { return map_u2(u, r, qring::parity_map); }

qring_status qring_u2_time_reversal(const qring_u2* u, qring_u2* r) {
  return map_u2(u, r, qring::time_reversal_map);
}

qring_status qring_u2_pt(const qring_u2* u, qring_u2* r) { return map_u2(u, r, qring::pt_map); }

qring_status qring_u2_p_theta(const qring_u2* u, double theta, qring_u2* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    require(std::isfinite(theta), "theta must be finite");
    *r = out(qring::p_theta_map(in(u), theta));
  });
}

qring_status qring_u2_classify(const qring_u2* u, const qring_geometry* g,
                               qring_classification* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    const qring::SubfamilyReport c = qring::classify(in(u), in(g));
    qring_classification o{};
    const bool bits[] = {c.f_p, c.f_t,      c.f_pt,       c.f1,        c.f2,        c.f3,
                         c.f4,  c.f5,       c.self_dual,  c.susy_plus, c.susy_minus};
    for (unsigned i = 0; i < sizeof(bits) / sizeof(bits[0]); ++i)
      if (bits[i]) o.flags |= 1u << i;
    if (c.separated_lengths) {
      o.has_separated = 1;
      o.separated[0] = c.separated_lengths->first;
      o.separated[1] = c.separated_lengths->second;
    }
    if (c.wall_lengths) {
      o.has_walls = 1;
      o.walls[0] = c.wall_lengths->first;
      o.walls[1] = c.wall_lengths->second;
    }
    *r = o;
  });
}

qring_status qring_triple_distance(const qring_triple* a, const qring_triple* b, double* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = qring::triple_distance(in(a), in(b));
  });
}

qring_status qring_haar_u2(uint64_t seed, size_t count, qring_u2* r) {
  return guarded([&] {
    require(r != nullptr || count == 0, "null output");
    qring::Rng rng(seed);
    for (size_t i = 0; i < count; ++i) r[i] = out(qring::from_matrix(qring::haar_u2(rng)));
  });
}

qring_status qring_spectrum_compute(const qring_u2* u, const qring_geometry* g, int count,
                                    const qring_options* opt, qring_spectrum** r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = nullptr;
    auto h = std::make_unique<qring_spectrum>();
    h->sp = qring::full_spectrum(in(u), in(g), count, in(opt));
    *r = h.release();
  });
}

qring_status qring_spectrum_compute_two_point(const qring_u2* u1, const qring_u2* u2,
                                              const qring_geometry* g, int count,
                                              const qring_options* opt, qring_spectrum** r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = nullptr;
    auto h = std::make_unique<qring_spectrum>();
    h->sp = qring::spectrum2({in(u1), in(u2), in(g)}, count, in(opt));
    *r = h.release();
  });
}

size_t qring_spectrum_size(const qring_spectrum* s) { return s ? s->sp.levels.size() : 0; }

qring_status qring_spectrum_level(const qring_spectrum* s, size_t i, qring_level* r) {
  return guarded([&] {
    require(s != nullptr && r != nullptr, "null argument");
    require(i < s->sp.levels.size(), "level index out of range");
    const qring::Level& lv = s->sp.levels[i];
    r->sector = static_cast<int>(lv.sector);
    r->wavenumber = lv.wavenumber;
    r->energy = lv.energy;
    r->multiplicity = lv.multiplicity;
    r->near_double = lv.near_double ? 1 : 0;
  });
}

void qring_spectrum_free(qring_spectrum* s) { delete s; }

qring_status qring_conjugate_pair(const qring_u2* u1, const qring_u2* u2, const qring_complex v[4],
                                  qring_u2* o1, qring_u2* o2) {
  return guarded([&] {
    require(o1 != nullptr && o2 != nullptr, "null output");
    const qring::TwoPointSystem s = qring::conjugate_pair({in(u1), in(u2), {}}, in(v));
    *o1 = out(s.u1);
    *o2 = out(s.u2);
  });
}

qring_status qring_diagonalize(const qring_u2* u, qring_complex v[4], double* tp, double* tm) {
  return guarded([&] {
    require(v != nullptr && tp != nullptr && tm != nullptr, "null output");
    const qring::Diagonalization d = qring::diagonalize_u(in(u));
    out(d.v, v);
    *tp = d.theta_plus;
    *tm = d.theta_minus;
  });
}

qring_status qring_prefix_create(const qring_geometry* g, const double* k, size_t nk, int zero,
                                 const double* kappa, size_t nkappa, qring_prefix** r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    require(k != nullptr || nk == 0, "null positive data");
    require(kappa != nullptr || nkappa == 0, "null negative data");
    *r = nullptr;
    auto h = std::make_unique<qring_prefix>();
    h->p.geom = in(g);
    h->p.positive_k.assign(k, k + nk);
    h->p.has_zero_mode = zero != 0;
    h->p.negative_kappa.assign(kappa, kappa + nkappa);
    h->p.validate();
    *r = h.release();
  });
}

qring_status qring_prefix_from_spectrum(const qring_spectrum* s, const qring_geometry* g,
                                        qring_prefix** r) {
  return guarded([&] {
    require(s != nullptr && r != nullptr, "null argument");
    *r = nullptr;
    auto h = std::make_unique<qring_prefix>();
    h->p = qring::prefix_from_spectrum(s->sp, in(g));
    *r = h.release();
  });
}

void qring_prefix_free(qring_prefix* p) { delete p; }

qring_status qring_invert(const qring_prefix* p, qring_method method, uint64_t seed,
                          qring_inversion* r) {
  invert_warnings.clear();
  return guarded([&] {
    require(p != nullptr && r != nullptr, "null argument");
    qring_inversion o{};
    const qring::CaseLabel stats = qring::case_statistics(p->p);
    o.label = out(stats.kind);
    o.max_abs_sin = stats.max_abs_sin;
    o.tail_cos_mean = stats.tail_cos_mean;
    o.tail_cos_spread = stats.tail_cos_spread;
    if (method == QRING_FIT) {
      const qring::FitResult f = qring::fit_parameters(p->p, seed);
      o.triple = out(f.triple);
      o.resolved = o.label;
      o.has_fit = 1;
      o.fit = o.triple;
      o.fit_residual = f.residual;
    } else {
      require(method == QRING_ASYMPTOTIC || method == QRING_BOTH, "unknown inversion method");
      const qring::Recovery rec = qring::recover_parameters(p->p, method == QRING_BOTH, seed);
      o.triple = out(rec.triple);
      o.resolved = out(rec.resolved);
      if (rec.fit) {
        o.has_fit = 1;
        o.fit = out(rec.fit->triple);
        o.fit_residual = rec.fit->residual;
        o.disagreement = rec.disagreement;
      }
      invert_warnings = rec.warnings;
      o.n_warnings = static_cast<int>(rec.warnings.size());
    }
    *r = o;
  });
}

const char* qring_invert_warning(int i) {
  if (i < 0 || i >= static_cast<int>(invert_warnings.size())) return nullptr;
  return invert_warnings[i].c_str();
}

qring_status qring_kernel_create(const qring_u2* u, const qring_geometry* g,
                                 qring_kernel_family family, int n_levels, qring_kernel** r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    *r = nullptr;
    auto h = std::make_unique<qring_kernel>();
    h->u = in(u);
    h->g = in(g);
    if (family == QRING_KERNEL_AUTO) {
      const qring::SubfamilyReport c = qring::classify(h->u, h->g);
      if (!c.f2) throw qring::Error(qring::Status::Unsupported, "no closed-form kernel for this boundary condition");
      try {
        qring::box_case_of(h->u);
        family = QRING_KERNEL_BOX;
      } catch (const qring::Error&) {
        family = c.f3 ? QRING_KERNEL_SMOOTH : QRING_KERNEL_F2;
      }
    }
    switch (family) {
      case QRING_KERNEL_BOX: h->box = qring::box_case_of(h->u); break;
      case QRING_KERNEL_SMOOTH: h->theta = qring::smooth_theta_of(h->u); break;
      case QRING_KERNEL_F2: h->images = std::make_unique<qring::ScaleInvariantKernel>(h->u, h->g); break;
      case QRING_KERNEL_SPECTRAL:
        require(n_levels > 0, "spectral kernel needs a positive level count");
        h->spectral = std::make_unique<qring::SpectralKernel>(h->u, h->g, n_levels);
        break;
      default: require(false, "unknown kernel family");
    }
    h->family = family;
    *r = h.release();
  });
}

qring_status qring_kernel_eval(const qring_kernel* k, double a, double b, qring_complex time,
                               double tol, int n_max, qring_complex* r) {
  return guarded([&] {
    require(k != nullptr && r != nullptr, "null argument");
    qring::KernelQuery q{a, b, in(time), tol > 0.0 ? tol : 1e-15, n_max};
    qring::cplx v;
    switch (k->family) {
      case QRING_KERNEL_BOX: v = qring::box_kernel(k->box, k->g, q); break;
      case QRING_KERNEL_SMOOTH: v = qring::smooth_kernel(k->theta, k->g, q); break;
      case QRING_KERNEL_F2: v = (*k->images)(q); break;
      default: v = (*k->spectral)(q); break;
    }
    *r = out(v);
  });
}

qring_kernel_family qring_kernel_family_of(const qring_kernel* k) {
  return k ? k->family : QRING_KERNEL_AUTO;
}

void qring_kernel_free(qring_kernel* k) { delete k; }

qring_status qring_kernel_crosscheck(const qring_u2* u, const qring_geometry* g, double tau,
                                     int n, int n_levels, qring_crosscheck* r) {
  return guarded([&] {
    require(r != nullptr, "null output");
    require(n > 0 && n_levels > 0, "grid size and level count must be positive");
    require(tau > 0.0, "tau must be positive");
    const qring::Geometry geo = in(g);
    std::vector<qring::KernelQuery> pts;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        pts.push_back(qring::euclidean_query((i + 0.5) * geo.l / n, (j + 0.5) * geo.l / n, tau));
    const qring::CrosscheckReport c = qring::kernel_crosscheck(in(u), geo, pts, n_levels);
    r->family = c.family == "box" ? QRING_KERNEL_BOX
                                  : (c.family == "smooth" ? QRING_KERNEL_SMOOTH : QRING_KERNEL_F2);
    r->max_deviation = c.max_deviation;
    r->unimodular = c.unimodular ? 1 : 0;
    r->truncation_warning = c.truncation_warning ? 1 : 0;
  });
}

}  // extern "C"
