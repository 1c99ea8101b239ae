#pragma once

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <utility>

#include "kleinx/errors.hpp"

namespace kleinx::rootfind {

/// Refine a bracketed root of f on [a, b] (f(a) and f(b) of opposite sign)
/// to an interval of width <= tol_x; returns the interval midpoint.
/// Bracketing interpolation (TOMS 748), robust for flat crossings.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb,
                      double tol_x = 1e-12) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError("bracketed_root: endpoints do not bracket a sign change");
  auto stop = [tol_x](double lo, double hi) { return std::abs(hi - lo) <= tol_x; };
  std::uintmax_t max_iter = 200;
  auto r = boost::math::tools::toms748_solve(std::forward<F>(f), a, b, fa, fb,
                                             stop, max_iter);
  return 0.5 * (r.first + r.second);
}

/// Plain bisection on [a, b] until the bracket width drops below tol_x.
template <class F>
double bisect_root(F&& f, double a, double b, double tol_x = 1e-10) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError("bisect_root: endpoints do not bracket a sign change");
  while (b - a > tol_x) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace kleinx::rootfind
