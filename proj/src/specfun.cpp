#include "kleinx/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kleinx/quadrature.hpp"

namespace kleinx::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

struct AgmResult {
  double K;
  double E;
  int iterations;
};

// Arithmetic–geometric mean at modulus k < 1.  Returns K = pi / (2 a_n) and
// E = K * (1 - sum_n 2^{n-1} c_n^2) with c_0 = k, c_{n+1} = (a_n - b_n)/2.
AgmResult run_agm(double k) {
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  double c = k;
  double sum = 0.5 * c * c;  // n = 0 term
  double pow2 = 1.0;
  int n = 0;
  while (std::abs(c) > 1e-17 * a && n < 40) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    ++n;
    pow2 *= 2.0;
    sum += 0.5 * pow2 * c * c;
  }
  const double K = kPi / (2.0 * a);
  return {K, K * (1.0 - sum), n};
}

void require_modulus(double k, bool allow_one, const char* who) {
  const bool bad = !(k >= 0.0) || (allow_one ? k > 1.0 : k >= 1.0);
  if (bad) {
    throw std::domain_error(std::string(who) + ": modulus must satisfy " +
                            (allow_one ? "0 <= k <= 1" : "0 <= k < 1"));
  }
}

// Largest real zero of 4t^3 - g2 t - g3, i.e. of the depressed cubic
// t^3 + p t + q with p = -g2/4, q = -g3/4; Newton-polished.
double largest_real_cubic_root(double g2, double g3) {
  const double p = -0.25 * g2;
  const double q = -0.25 * g3;
  double t;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  if (disc > 0.0) {
    // Three real roots: trigonometric form, branch m = 0 gives the largest.
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    t = r * std::cos(std::acos(arg) / 3.0);
  } else if (p == 0.0) {
    t = std::cbrt(-q);
  } else {
    // One real root: Cardano (p < 0) / hyperbolic-safe form via cbrt.
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
  }
  for (int i = 0; i < 8; ++i) {
    const double f = ((4.0 * t * t) * t) - g2 * t - g3;
    const double df = 12.0 * t * t - g2;
    if (df == 0.0) break;
    const double step = f / df;
    t -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(t))) break;
  }
  return t;
}

}  // namespace

double complete_K(double k) {
  require_modulus(k, /*allow_one=*/false, "complete_K");
  return run_agm(k).K;
}

double complete_E(double k) {
  require_modulus(k, /*allow_one=*/true, "complete_E");
  if (k == 1.0) return 1.0;
  return run_agm(k).E;
}

int agm_iteration_count(double k) {
  require_modulus(k, /*allow_one=*/false, "agm_iteration_count");
  return run_agm(k).iterations;
}

JacobiValues jacobi_cn_sn_dn(double u, double k) {
  require_modulus(k, /*allow_one=*/false, "jacobi_cn_sn_dn");
  // Descending Landen transformation on the complementary parameter
  // mc = 1 - k^2: fold the modulus toward 0, evaluate circular functions,
  // then unfold.  Terminates when |a - c| <= tol*a; accuracy ~ tol^2.
  constexpr double tol = 1e-8;
  double mc = (1.0 - k) * (1.0 + k);
  if (mc == 0.0) {  // unreachable through the domain check; kept for safety
    const double c = 1.0 / std::cosh(u);
    return {c, std::tanh(u), c};
  }
  double a = 1.0;
  double dn = 1.0;
  double ag[16];
  double root_mc[16];
  int depth = 0;
  double c = 0.0;
  for (int i = 0; i < 16; ++i) {
    depth = i;
    ag[i] = a;
    mc = std::sqrt(mc);
    root_mc[i] = mc;
    c = 0.5 * (a + mc);
    if (std::abs(a - mc) <= tol * a) break;
    mc *= a;
    a = c;
  }
  const double phase = c * u;
  double sn = std::sin(phase);
  double cn = std::cos(phase);
  if (sn != 0.0) {
    double ratio = cn / sn;
    c *= ratio;
    for (int i = depth; i >= 0; --i) {
      const double b = ag[i];
      ratio *= c;
      c *= dn;
      dn = (root_mc[i] + ratio) / (b + ratio);
      ratio = c / b;
    }
    const double inv = 1.0 / std::sqrt(c * c + 1.0);
    sn = (sn >= 0.0) ? inv : -inv;
    cn = c * sn;
  }
  return {cn, sn, dn};
}

WeierstrassInvariants::WeierstrassInvariants(double g2_in, double g3_in)
    : g2(g2_in), g3(g3_in) {
  const double scale =
      std::abs(g2 * g2 * g2) + 27.0 * g3 * g3 + 1.0;
  if (std::abs(discriminant()) <= 1e-12 * scale) {
    throw std::domain_error(
        "WeierstrassInvariants: degenerate lattice (g2^3 - 27 g3^2 = 0)");
  }
}

WeierstrassP::WeierstrassP(WeierstrassInvariants inv, double pole_guard)
    : inv_(inv), guard_(pole_guard) {
  if (!(guard_ > 0.0)) {
    throw std::domain_error("WeierstrassP: pole guard must be positive");
  }
  e_max_ = largest_real_cubic_root(inv_.g2, inv_.g3);

  // Real half-period omega = integral_{e_max}^inf dt / sqrt(4t^3 - g2 t - g3).
  // Substituting t = e_max + s^2 removes the inverse-square-root endpoint
  // singularity: omega = integral_0^inf ds / sqrt(t^2 + e_max t + cq)
  // with cq = e_max^2 - g2/4.
  const double e = e_max_;
  const double cq = e * e - 0.25 * inv_.g2;
  omega_ = quadrature::integrate(
      [e, cq](double s) {
        const double t = e + s * s;
        return 1.0 / std::sqrt((t + e) * t + cq);
      },
      0.0, quadrature::infinity(), 1e-14);

  series_radius_ = 0.25 * omega_;

  // Laurent coefficients: P(z) = z^-2 + sum_{j>=2} c_j z^{2j-2};
  // c_2 = g2/20, c_3 = g3/28, and for j >= 4
  //   c_j = 3 / ((2j+1)(j-3)) * sum_{m=2}^{j-2} c_m c_{j-m}.
  coeff_.assign(2, 0.0);  // placeholders for indices 0, 1
  coeff_.push_back(inv_.g2 / 20.0);
  coeff_.push_back(inv_.g3 / 28.0);
  const double r2 = series_radius_ * series_radius_;
  double term_scale = r2 * r2 * r2;  // r^{2j} for j = 3
  for (int j = 4; j <= 60; ++j) {
    double acc = 0.0;
    for (int m = 2; m <= j - 2; ++m) acc += coeff_[m] * coeff_[j - m];
    const double cj = 3.0 / ((2.0 * j + 1.0) * (j - 3.0)) * acc;
    coeff_.push_back(cj);
    term_scale *= r2;
    if (std::abs(cj) * term_scale < 1e-18) break;
  }
}

WeierstrassP::Scaled WeierstrassP::laurent_scaled(double z) const {
  // z^2 * P = 1 + sum c_j z^{2j};  z^3 * P' = -2 + sum (2j-2) c_j z^{2j}.
  const double z2 = z * z;
  double P = 1.0;
  double dP = -2.0;
  double zpow = z2;
  for (std::size_t j = 2; j < coeff_.size(); ++j) {
    zpow *= z2;
    const double t = coeff_[j] * zpow;
    P += t;
    dP += (2.0 * static_cast<double>(j) - 2.0) * t;
    if (std::abs(t) < 1e-17 * std::abs(P)) break;
  }
  return {P, dP};
}

WeierstrassP::Value WeierstrassP::eval_folded(double x) const {
  int doublings = 0;
  double x0 = x;
  while (x0 > series_radius_) {
    x0 *= 0.5;
    ++doublings;
  }
  const Scaled s = laurent_scaled(x0);
  double p = s.P / (x0 * x0);
  double dp = s.dP / (x0 * x0 * x0);
  for (int i = 0; i < doublings; ++i) {
    // Duplication through the derivative triple:
    //   P''  = 6 P^2 - g2/2,        P''' = 12 P P',
    //   A    = P'' / (2 P'),        A'   = (P''' P' - P''^2) / (2 P'^2),
    //   P(2z)  = A^2 - 2 P,         P'(2z) = A A' - P'.
    const double pp = 6.0 * p * p - 0.5 * inv_.g2;
    const double ppp = 12.0 * p * dp;
    const double A = pp / (2.0 * dp);
    const double Ap = (ppp * dp - pp * pp) / (2.0 * dp * dp);
    const double p2 = A * A - 2.0 * p;
    const double dp2 = A * Ap - dp;
    p = p2;
    dp = dp2;
  }
  return {p, dp};
}

WeierstrassP::Value WeierstrassP::eval(double z) const {
  // Reduce modulo the real period 2*omega into [-omega, omega]; P is even
  // and P' odd, so fold to [0, omega] and restore the derivative sign.
  const double period = 2.0 * omega_;
  double r = std::remainder(z, period);
  const double sign = (r < 0.0) ? -1.0 : 1.0;
  r = std::abs(r);
  if (r < guard_) {
    throw PoleError("WeierstrassP: argument within pole guard of a lattice point");
  }
  Value v = eval_folded(r);
  v.dp *= sign;
  return v;
}

double WeierstrassP::rational(double z, double A, double B, double C,
                              double D) const {
  const double period = 2.0 * omega_;
  const double r = std::abs(std::remainder(z, period));
  if (r <= series_radius_) {
    // Near a lattice point: multiply numerator and denominator by z^2 and
    // use the scaled series P = z^2 * P(z), which is regular there.
    const double r2 = r * r;
    const double P = (r == 0.0) ? 1.0 : laurent_scaled(r).P;
    return (A * P + B * r2) / (C * P + D * r2);
  }
  const double p = eval_folded(r).p;
  return (A * p + B) / (C * p + D);
}

double weierstrass_p(double y, const WeierstrassInvariants& inv) {
  return WeierstrassP(inv).eval(y).p;
}

}  // namespace kleinx::specfun
