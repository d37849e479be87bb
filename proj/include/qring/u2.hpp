// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace qring {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kDefaultTol = 1e-10;

// U = e^{i xi} [[alpha, beta], [-conj(beta), conj(alpha)]], xi in [0, pi).
struct CharacteristicMatrix {
  double xi = 0.0;
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  double alpha_r() const { return alpha.real(); }
  double alpha_i() const { return alpha.imag(); }
  double beta_r() const { return beta.real(); }
  double beta_i() const { return beta.imag(); }

  // Throws InvalidArgument when |alpha|^2+|beta|^2 deviates from 1 by more than tol
  // or xi lies outside [0, pi).
  void validate(double tol = 1e-12) const;
};

// The parameters that fix the spectrum.
struct SpectralTriple {
  double xi = 0.0;
  double alpha_r = 1.0;
  double beta_i = 0.0;

  void validate(double tol = 1e-12) const;
};

struct Geometry {
  double l = 1.0;
  double l0 = 1.0;

  void validate() const;
};

struct SubfamilyReport {
  bool f_p = false;
  bool f_t = false;
  bool f_pt = false;
  bool f1 = false;
  bool f2 = false;
  bool f3 = false;
  bool f4 = false;
  bool f5 = false;
  bool self_dual = false;
  bool susy_plus = false;
  bool susy_minus = false;
  // Only for f1. L = +inf encodes a Neumann-type wall.
  // separated: L0 cot((xi + arccos aR)/2), L0 cot((xi - arccos aR)/2).
  std::optional<std::pair<double, double>> separated_lengths;
  // Oriented: (wall at x = 0, wall at x = l), convention psi + L dpsi/dn = 0 with inward normal.
  std::optional<std::pair<double, double>> wall_lengths;
};

CharacteristicMatrix from_matrix(const Mat2& m, double tol = kDefaultTol);
Mat2 to_matrix(const CharacteristicMatrix& u);
SpectralTriple spectral_triple(const CharacteristicMatrix& u);

// A representative U with the given triple: alpha_I carries the remaining norm, beta_R = 0.
// Triples within 1e-15 of the circle alpha_R^2 + beta_I^2 = 1 are snapped onto it.
CharacteristicMatrix canonical_matrix(const SpectralTriple& t);

CharacteristicMatrix parity_map(const CharacteristicMatrix& u);
CharacteristicMatrix time_reversal_map(const CharacteristicMatrix& u);
CharacteristicMatrix pt_map(const CharacteristicMatrix& u);
CharacteristicMatrix p_theta_map(const CharacteristicMatrix& u, double theta);

// U_W = [M(I+U) - N(I-U)] [M(I+U) + N(I-U)]^{-1}.
CharacteristicMatrix induced_map(const CharacteristicMatrix& u, const Mat2& m, const Mat2& n,
                                 double tol = kDefaultTol);

SubfamilyReport classify(const CharacteristicMatrix& u, const Geometry& geom,
                         double tol = kDefaultTol);

// Zeroes alpha_I and beta_R when both are below tol and renormalizes.
CharacteristicMatrix snap_to_locus(const CharacteristicMatrix& u, double tol = kDefaultTol);

// Max-norm distance between triples, honouring (xi, aR, bI) ~ (xi +- pi, -aR, -bI).
double triple_distance(const SpectralTriple& a, const SpectralTriple& b);

double unitarity_defect(const Mat2& m);

Mat2 pauli1();
Mat2 pauli2();
Mat2 pauli3();

}  // namespace qring
