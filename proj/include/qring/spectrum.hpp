// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qring/u2.hpp"

namespace qring {

enum class Sector { Negative, Zero, Positive };

const char* sector_name(Sector s);

// Energies use hbar^2/2m = 1: E = k^2 or -kappa^2.
struct Level {
  Sector sector = Sector::Positive;
  double wavenumber = 0.0;
  double energy = 0.0;
  int multiplicity = 1;
  // Even-order root of the secular function with a rank-one secular matrix.
  bool near_double = false;
};

struct Spectrum {
  std::vector<Level> levels;
  SpectralTriple triple;
};

struct SpectralOptions {
  double zero_tol = 1e-10;      // |G(0)| threshold, relative to 1 + l/(2 L0)
  double rank_tol = 1e-8;       // singular value threshold, relative to the matrix scale
  double merit_tol = 1e-9;      // acceptance of merit minima as roots
  double candidate_tol = 0.25;  // |g| below which a grid minimum is refined
  int grid_per_pi = 16;         // scan points per pi/l
};

struct SecularMatrix {
  double k = 0.0;
  Mat2 entries;
  double scale = 1.0;  // ||U-I|| ||tau|| + k L0 ||U+I|| ||tau||
};

double secular_positive(const SpectralTriple& t, const Geometry& g, double k);
double secular_positive_derivative(const SpectralTriple& t, const Geometry& g, double k);
double secular_negative(const SpectralTriple& t, const Geometry& g, double kappa);
// e^{-kappa l} * secular_negative, finite for all kappa.
double secular_negative_scaled(const SpectralTriple& t, const Geometry& g, double kappa);
bool zero_mode_exists(const SpectralTriple& t, const Geometry& g, double tol = 1e-10);

// (U-I) tau_k - k L0 (U+I) s3 tau_k s3, tau_k = [[1,1],[e^{ikl},e^{-ikl}]].
SecularMatrix secular_matrix(const Mat2& u, const Geometry& g, double k);
// Basis A' e^{kappa(x-l)} + B e^{-kappa x}.
SecularMatrix negative_matrix(const Mat2& u, const Geometry& g, double kappa);
// Basis A + B x.
SecularMatrix zero_matrix(const Mat2& u, const Geometry& g);

std::vector<Level> positive_levels(const SpectralTriple& t, const Geometry& g, int count,
                                   const SpectralOptions& opt = {});
std::vector<Level> negative_levels(const SpectralTriple& t, const Geometry& g,
                                   const SpectralOptions& opt = {});
Spectrum full_spectrum(const SpectralTriple& t, const Geometry& g, int count,
                       const SpectralOptions& opt = {});
Spectrum full_spectrum(const CharacteristicMatrix& u, const Geometry& g, int count,
                       const SpectralOptions& opt = {});

struct DegeneracyReport {
  bool locus = false;
  bool full_doublets = false;  // U = +-sigma1
  std::vector<Level> levels;   // isolated degenerate levels
};

DegeneracyReport degeneracy_at(const CharacteristicMatrix& u, const Geometry& g,
                               double tol = kDefaultTol);

// psi = A e^{ikx} + B e^{-ikx}, A e^{kappa x} + B e^{-kappa x}, or A + B x on (0, l).
class Eigenfunction {
 public:
  Eigenfunction(Sector s, double wavenumber, const Geometry& g, cplx c0, cplx c1);

  Sector sector() const { return sector_; }
  double wavenumber() const { return k_; }
  cplx a() const;
  cplx b() const { return c1_; }
  cplx value(double x) const;
  cplx derivative(double x) const;
  // Boundary vector (psi(0+), psi(l-)) and derivative vector (psi'(0+), -psi'(l-)).
  Eigen::Vector2cd boundary_values() const;
  Eigen::Vector2cd boundary_derivatives() const;
  // Stored coefficients; for the negative sector c0 multiplies e^{kappa(x-l)}.
  Eigen::Vector2cd coefficients() const { return {c0_, c1_}; }

 private:
  Sector sector_;
  double k_;
  double l_;
  cplx c0_;
  cplx c1_;
};

// Hermitian Gram matrix of the sector basis on (0, l).
Eigen::Matrix2cd gram_matrix(Sector s, double wavenumber, const Geometry& g);

std::vector<Eigenfunction> eigenfunction(const CharacteristicMatrix& u, const Geometry& g,
                                         const Level& level, const SpectralOptions& opt = {});

double bc_residual(const Mat2& u, const Geometry& g, const Eigenfunction& f);

// j = Im(conj(psi) psi'), hbar/m = 1.
double probability_current(const Eigenfunction& f, double x);

struct SusyReport {
  bool passed = false;
  int doublets_checked = 0;
  double max_bc_residual = 0.0;
  double max_span_residual = 0.0;
  double max_energy_residual = 0.0;
  double zero_mode_derivative_norm = 0.0;  // NaN when no zero mode
  bool zero_mode_annihilated = false;
};

SusyReport verify_susy_pairing(const CharacteristicMatrix& u, const Geometry& g, int n_levels);

struct ScaleIndependenceReport {
  bool independent = false;
  double max_residual = 0.0;
  int levels_checked = 0;
};

ScaleIndependenceReport scale_independence_report(const CharacteristicMatrix& u,
                                                  const Geometry& g, int n_levels);
bool scale_independence_check(const CharacteristicMatrix& u, const Geometry& g, int n_levels);

}  // namespace qring
