// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qring/spectrum.hpp"
#include "qring/u2.hpp"

namespace qring {

// Units hbar = m = 1: H = -(1/2) d^2/dx^2. Euclidean time is time = -i tau.
struct KernelQuery {
  double a = 0.0;
  double b = 0.0;
  cplx time{0.0, -1.0};
  double truncation_tol = 1e-15;
  int n_max = 0;  // image budget; required for real time

  void validate(const Geometry& g) const;
};

inline KernelQuery euclidean_query(double a, double b, double tau, double tol = 1e-15) {
  return {a, b, cplx(0.0, -tau), tol, 0};
}

// Dimensionless time for physical hbar, m.
inline double reduced_time(double t, double hbar, double mass) { return hbar * t / mass; }
// The spectral module reports E = k^2 (hbar^2/2m = 1); the propagator uses E = k^2/2.
inline double kernel_energy(const Level& lv) { return 0.5 * lv.energy; }

cplx free_kernel(double displacement, cplx time);

// Walls named by (L at x=0, L at x=l); D is L = 0, N is L = infinity.
enum class BoxCase { DD, NN, DN, ND };

const char* box_case_name(BoxCase c);
// -I, I, -sigma3, sigma3; throws Unsupported otherwise.
BoxCase box_case_of(const CharacteristicMatrix& u, double tol = kDefaultTol);
Mat2 box_matrix(BoxCase c);

cplx box_kernel(BoxCase c, const Geometry& g, const KernelQuery& q);

// psi(0) = e^{i theta} psi(l): U = [[0, e^{i theta}], [e^{-i theta}, 0]].
cplx smooth_kernel(double theta, const Geometry& g, const KernelQuery& q);
Mat2 smooth_matrix(double theta);
double smooth_theta_of(const CharacteristicMatrix& u, double tol = kDefaultTol);

// Image sum for any F2 member, weights from W = sigma1 U.
class ScaleInvariantKernel {
 public:
  ScaleInvariantKernel(const CharacteristicMatrix& u, const Geometry& g,
                       double tol = kDefaultTol);

  cplx operator()(const KernelQuery& q) const;
  // Weight of the free kernel at displacement (b - a) + n l.
  cplx direct_weight(int n) const;
  // Weight of the free kernel at displacement (a + b) + n l.
  cplx reflected_weight(int n) const;
  // True when every nonzero weight with |n| <= n_max has modulus one.
  bool unimodular(int n_max, double tol = 1e-10) const;

 private:
  Mat2 power(int n) const;
  Mat2 w_;
  Geometry g_;
};

cplx scale_invariant_kernel(const CharacteristicMatrix& u, const Geometry& g, const KernelQuery& q);

class SpectralKernel {
 public:
  SpectralKernel(const CharacteristicMatrix& u, const Geometry& g, int n_levels);

  cplx operator()(const KernelQuery& q) const;
  // Magnitude bound of the last included level's contribution, for truncation warnings.
  double last_term(cplx time) const;
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  struct Mode {
    Eigenfunction f;
    double energy;  // kernel units
  };
  std::vector<Mode> modes_;
  Spectrum spectrum_;
  Geometry g_;
};

cplx spectral_kernel(const CharacteristicMatrix& u, const Geometry& g, const KernelQuery& q,
                     int n_levels);

struct CrosscheckReport {
  std::string family;  // "box", "smooth" or "f2"
  double max_deviation = 0.0;
  bool unimodular = false;
  bool truncation_warning = false;
};

// Compares the applicable closed form with the spectral sum on the given points.
CrosscheckReport kernel_crosscheck(const CharacteristicMatrix& u, const Geometry& g,
                                   const std::vector<KernelQuery>& points, int n_levels = 60);
CrosscheckReport kernel_crosscheck(const CharacteristicMatrix& u, const Geometry& g,
                                   const KernelQuery& q, int n_levels = 60);

}  // namespace qring
