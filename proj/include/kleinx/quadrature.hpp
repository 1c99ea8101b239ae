#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>
#include <utility>

namespace kleinx::quadrature {

/// Adaptive Gauss–Kronrod quadrature of f over [a, b].  The upper limit may
/// be +infinity; the integrand must decay there.  `tol` bounds the relative
/// error estimate of the adaptive refinement.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, tol);
}

/// Fixed-order 15-point Gauss–Legendre rule on [a, b]; no error control.
/// Intended for short smooth subintervals where the rule is exact to
/// rounding; used to accumulate cached antiderivative tables.
template <class F>
double gauss15(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 15>::integrate(
      std::forward<F>(f), a, b);
}

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace kleinx::quadrature
