// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "qring/u2.hpp"

namespace qring::detail {

struct ScanSettings {
  double merit_tol = 1e-9;
  double candidate_tol = 0.25;
  double merge_tol = 1e-9;  // absolute, in the units of the scan variable
};

struct Root {
  double x = 0.0;
  bool tangential = false;  // no sign change of the real secular function across x
};

// Roots of f on the grid span: sign changes are bracketed and solved, grid minima of |f|
// are refined on the merit function (which vanishes linearly at any root, including even
// order ones), and partners of refined roots inside the same window are bracketed.
std::vector<Root> scan_roots(const std::function<double(double)>& f,
                             const std::function<double(double)>& merit,
                             const std::vector<double>& grid, const ScanSettings& s);

double bracket_solve(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb);

double minimize_on(const std::function<double(double)>& f, double a, double b);

// Singular values of a 2x2 complex matrix, descending, without cancellation in the small one.
std::pair<double, double> singular_values2(const Mat2& m);

}  // namespace qring::detail
