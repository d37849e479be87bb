// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qring/spectrum.hpp"
#include "qring/u2.hpp"

namespace qring {

using Mat4 = Eigen::Matrix4cd;

// u1 acts at x = 0, u2 at x = l/2; states are doubled on [0, l/2].
struct TwoPointSystem {
  CharacteristicMatrix u1;
  CharacteristicMatrix u2;
  Geometry geom;
};

struct BlockSecular {
  double k = 0.0;
  Mat4 t;        // T_k
  Mat4 sigma3;   // diag(1, -1, 1, -1)
  Mat4 u_block;  // diag(U1, U2)
  Mat4 m;        // (U - I) T_k - k L0 (U + I) T_k Sigma3
  double merit = 0.0;  // smallest / largest singular value of m
};

BlockSecular block_secular(const TwoPointSystem& sys, double k);

Spectrum spectrum2(const TwoPointSystem& sys, int count, const SpectralOptions& opt = {});

TwoPointSystem conjugate_pair(const TwoPointSystem& sys, const Mat2& v, double tol = kDefaultTol);

struct IsospectralGroup {
  bool full_su2 = false;
  Mat2 axis = Mat2::Zero();  // generator of the U(1) subgroup when not full
};

IsospectralGroup isospectral_group_of(const CharacteristicMatrix& u2, double tol = kDefaultTol);

// u = v^{-1} diag(e^{i theta_plus}, e^{i theta_minus}) v, v in SU(2), theta in (-pi, pi].
struct Diagonalization {
  Mat2 v;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
};

Diagonalization diagonalize_u(const CharacteristicMatrix& u);

// Samples psi(x_j), x_j = j l / N with N even, mapped to Phi(x_j) = (psi(x_j), psi(l - x_j))
// for 0 <= j <= N/2.
struct DoubledSamples {
  std::vector<cplx> first;
  std::vector<cplx> second;
};

DoubledSamples doubled_state(const std::vector<cplx>& psi);
std::vector<cplx> undoubled_state(const DoubledSamples& phi);

}  // namespace qring
