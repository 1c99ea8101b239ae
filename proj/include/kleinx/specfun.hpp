#pragma once

#include <vector>

#include "kleinx/errors.hpp"

namespace kleinx::specfun {

// ---------------------------------------------------------------------------
// Complete elliptic integrals.
//
// All interfaces take the MODULUS k, never the parameter m = k^2:
//   K(k) = integral_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t)
//   E(k) = integral_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt
// ---------------------------------------------------------------------------

/// First kind, by the arithmetic–geometric mean.  Domain: 0 <= k < 1.
double complete_K(double k);

/// Second kind, by the arithmetic–geometric mean.  Domain: 0 <= k <= 1.
double complete_E(double k);

/// Number of AGM iterations the scheme performs at modulus k (0 <= k < 1).
/// Quadratic convergence keeps this small even for k near 1.
int agm_iteration_count(double k);

// ---------------------------------------------------------------------------
// Jacobi elliptic functions.
// ---------------------------------------------------------------------------

struct JacobiValues {
  double cn;
  double sn;
  double dn;
};

/// cn, sn, dn at argument u and modulus k (0 <= k < 1), evaluated by the
/// descending Landen transformation.
JacobiValues jacobi_cn_sn_dn(double u, double k);

// ---------------------------------------------------------------------------
// Weierstrass P-function with real invariants, on the real line.
// ---------------------------------------------------------------------------

struct WeierstrassInvariants {
  double g2;
  double g3;
  /// Rejects a degenerate lattice (g2^3 - 27 g3^2 == 0).
  WeierstrassInvariants(double g2_in, double g3_in);
  double discriminant() const { return g2 * g2 * g2 - 27.0 * g3 * g3; }
};

/// Evaluator for P(z; g2, g3) and its derivative for real z on the real
/// period line.  Strategy: truncated Laurent series near the origin (next
/// term below 1e-16 relative), then repeated argument duplication out to the
/// reduced argument; the reduction uses the real half-period omega, computed
/// once from the largest real zero of 4t^3 - g2 t - g3.
class WeierstrassP {
 public:
  explicit WeierstrassP(WeierstrassInvariants inv, double pole_guard = 1e-6);

  struct Value {
    double p;   // P(z)
    double dp;  // P'(z)
  };

  /// P and P' at z.  Throws PoleError when z is within the pole guard of a
  /// lattice point.
  Value eval(double z) const;
  double operator()(double z) const { return eval(z).p; }
  double derivative(double z) const { return eval(z).dp; }

  /// (A*P(z) + B) / (C*P(z) + D), with the correct finite limit at lattice
  /// points (both numerator and denominator are rescaled by z^2 there, so no
  /// pole guard applies).  The denominator C*P + D must not vanish at z.
  double rational(double z, double A, double B, double C, double D) const;

  double real_half_period() const { return omega_; }
  /// Largest real zero of 4t^3 - g2 t - g3 (the value of P at omega).
  double e_max() const { return e_max_; }
  const WeierstrassInvariants& invariants() const { return inv_; }
  double pole_guard() const { return guard_; }

 private:
  struct Scaled {
    double P;   // z^2 * P(z)
    double dP;  // z^3 * P'(z)
  };
  Scaled laurent_scaled(double z) const;  // valid for |z| <= series_radius_
  Value eval_folded(double x) const;      // x in (0, omega], past the guard

  WeierstrassInvariants inv_;
  double guard_;
  double e_max_ = 0.0;
  double omega_ = 0.0;
  double series_radius_ = 0.0;
  std::vector<double> coeff_;  // Laurent coefficients c_2, c_3, ...
};

/// One-shot convenience wrapper around WeierstrassP::eval().p.
double weierstrass_p(double y, const WeierstrassInvariants& inv);

}  // namespace kleinx::specfun
