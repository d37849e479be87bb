// Copyright qring contributors
// SPDX-License-Identifier: Apache-2.0

#include "roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace qring::detail {

double bracket_solve(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(52);
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

double minimize_on(const std::function<double(double)>& f, double a, double b) {
  std::uintmax_t iters = 300;
  const auto r = boost::math::tools::brent_find_minima(f, a, b, 52, iters);
  // Brent stops near sqrt(eps); a V-shaped merit needs the minimum to full precision.
  const double w = 1e-4 * (b - a);
  double lo = std::max(a, r.first - w);
  double hi = std::min(b, r.first + w);
  constexpr double kGold = 0.6180339887498949;
  double x1 = hi - kGold * (hi - lo);
  double x2 = lo + kGold * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 80 && hi - lo > 1e-16 * std::abs(hi); ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGold * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGold * (hi - lo);
      f2 = f(x2);
    }
  }
  const double xm = f1 <= f2 ? x1 : x2;
  return f(xm) <= r.second ? xm : r.first;
}

std::pair<double, double> singular_values2(const Mat2& m) {
  const double fro2 = m.squaredNorm();
  const double det = std::abs(m.determinant());
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double smax = std::sqrt(0.5 * (fro2 + disc));
  const double smin = smax > 0.0 ? det / smax : 0.0;
  return {smax, smin};
}

namespace {

void add_bracketed(const std::function<double(double)>& f, double a, double b,
                   std::vector<Root>& out) {
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0 || fb == 0.0 || (fa < 0) != (fb < 0))
    out.push_back({bracket_solve(f, a, b, fa, fb), false});
}

}  // namespace

std::vector<Root> scan_roots(const std::function<double(double)>& f,
                             const std::function<double(double)>& merit,
                             const std::vector<double>& grid, const ScanSettings& s) {
  std::vector<Root> roots;
  const std::size_t n = grid.size();
  if (n < 2) return roots;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(grid[i]);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (v[i] == 0.0) {
      roots.push_back({grid[i], false});
    } else if (v[i + 1] != 0.0 && (v[i] < 0) != (v[i + 1] < 0)) {
      roots.push_back({bracket_solve(f, grid[i], grid[i + 1], v[i], v[i + 1]), false});
    }
  }
  if (v[n - 1] == 0.0) roots.push_back({grid[n - 1], false});

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(v[i]);
    if (a > s.candidate_tol || a > std::abs(v[i - 1]) || a > std::abs(v[i + 1])) continue;
    const double lo = grid[i - 1];
    const double hi = grid[i + 1];
    const double xm = minimize_on(merit, lo, hi);
    if (!(merit(xm) < s.merit_tol)) continue;
    const double eta = 1e-6 * (hi - lo);
    const double fl = f(xm - eta);
    const double fr = f(xm + eta);
    const bool crosses = (fl < 0) != (fr < 0);
    roots.push_back({xm, !crosses});
    if (xm - eta > lo) add_bracketed(f, lo, xm - eta, roots);
    if (xm + eta < hi) add_bracketed(f, xm + eta, hi, roots);
  }

  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
  std::vector<Root> merged;
  int crossings = 0;
  for (const Root& r : roots) {
    if (!merged.empty()) {
      Root& m = merged.back();
      const double gap = r.x - m.x;
      if (gap < s.merge_tol * (1.0 + std::abs(r.x))) {
        if (m.tangential && !r.tangential) m.x = r.x;
        m.tangential = m.tangential && r.tangential;
        continue;
      }
      // Rounding splits an even-order root into a cluster of sign changes.
      if (gap < 1e-6 * (1.0 + std::abs(r.x)) && merit(0.5 * (m.x + r.x)) < s.merit_tol) {
        crossings += r.tangential ? 0 : 1;
        if (merit(r.x) < merit(m.x)) m.x = r.x;
        m.tangential = crossings % 2 == 0;
        continue;
      }
    }
    merged.push_back(r);
    crossings = r.tangential ? 0 : 1;
  }
  return merged;
}

}  // namespace qring::detail
