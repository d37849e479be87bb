// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qring/spectrum.hpp"
#include "qring/u2.hpp"

namespace qring {

struct SpectrumPrefix {
  std::vector<double> positive_k;      // ascending, > 0
  bool has_zero_mode = false;
  std::vector<double> negative_kappa;  // 0..2 entries
  Geometry geom;

  void validate() const;
};

// Each distinct level contributes one entry regardless of multiplicity.
SpectrumPrefix prefix_from_spectrum(const Spectrum& sp, const Geometry& g);

enum class CaseKind { I, II, III, Ambiguous };

const char* case_name(CaseKind c);

struct CaseLabel {
  CaseKind kind = CaseKind::Ambiguous;
  double max_abs_sin = 0.0;
  double tail_cos_mean = 0.0;
  double tail_cos_spread = 0.0;
  // Smallest relative singular value of the linear case-II model over all roots.
  double model_ii_residual = 0.0;
};

// Throws Ambiguous when the tail statistics straddle the thresholds.
CaseLabel classify_case(const SpectrumPrefix& p, double tol_sin = 1e-9);
// Same statistics, never throws for ambiguity.
CaseLabel case_statistics(const SpectrumPrefix& p, double tol_sin = 1e-9);

struct AsymptoticCoeffs {
  double c1_plus = 0.0, c1_minus = 0.0;
  double c3_plus = 0.0, c3_minus = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double fit_residual = 0.0;
};

SpectralTriple recover_case_I(const SpectrumPrefix& p);
SpectralTriple recover_case_II(const SpectrumPrefix& p);
AsymptoticCoeffs estimate_c_coeffs(const SpectrumPrefix& p, double tol = 1e-6);
// a1, a2, a3 from the linear relation every root satisfies; no tail extrapolation.
AsymptoticCoeffs exact_a_coeffs(const SpectrumPrefix& p);
SpectralTriple recover_case_III(const AsymptoticCoeffs& c, const Geometry& g, double tol = 1e-9);

struct FitResult {
  SpectralTriple triple;
  double residual = 0.0;  // RMS of normalized secular residuals
  int starts = 0;
};

FitResult fit_parameters(const SpectrumPrefix& p, std::uint64_t seed = 0);

struct Recovery {
  SpectralTriple triple;
  CaseLabel label;
  CaseKind resolved = CaseKind::Ambiguous;
  std::optional<FitResult> fit;
  double disagreement = 0.0;  // triple_distance(asymptotic, fit) when both ran
  std::vector<std::string> warnings;
};

Recovery recover_parameters(const SpectrumPrefix& p, bool cross_validate = true,
                            std::uint64_t seed = 0);

// RMS of the normalized secular residuals of a prefix under a candidate triple.
double prefix_residual(const SpectrumPrefix& p, const SpectralTriple& t);

}  // namespace qring
