#include "kleinx/extremal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kleinx/errors.hpp"
#include "kleinx/quadrature.hpp"
#include "kleinx/specfun.hpp"

namespace kleinx::extremal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double speed_integrand(double t) {
  const double c = std::cos(t);
  return 0.5 / std::sqrt(1.0 - 0.25 * c * c);
}

// dy/dtheta = 1 / sqrt(4 - cos^2 theta).
double dy_dtheta(double theta) {
  const double c = std::cos(theta);
  return 1.0 / std::sqrt(4.0 - c * c);
}

// Monotone inverter with a fine cached quadrature grid over one turn.
class ThetaInverter {
 public:
  static constexpr int kN = 4096;

  ThetaInverter() : a_(2.0 * specfun::complete_K(0.5)) {
    ygrid_[0] = 0.0;
    for (int i = 1; i <= kN; ++i) {
      const double t0 = kTwoPi * (i - 1) / kN;
      const double t1 = kTwoPi * i / kN;
      ygrid_[static_cast<std::size_t>(i)] =
          ygrid_[static_cast<std::size_t>(i - 1)] +
          quadrature::gauss15(speed_integrand, t0, t1);
    }
  }

  double period() const { return a_; }

  // theta for y in [0, a).
  double theta_in_turn(double y) const {
    const auto it = std::upper_bound(ygrid_.begin(), ygrid_.end(), y);
    std::size_t idx = static_cast<std::size_t>(it - ygrid_.begin());
    if (idx > 0) --idx;
    idx = std::min<std::size_t>(idx, kN - 1);

    const double t_lo = kTwoPi * static_cast<double>(idx) / kN;
    const double t_hi = kTwoPi * static_cast<double>(idx + 1) / kN;
    const double y_lo = ygrid_[idx];
    const double y_hi = ygrid_[idx + 1];

    double t = t_lo + (y - y_lo) / (y_hi - y_lo) * (t_hi - t_lo);
    for (int iter = 0; iter < 40; ++iter) {
      const double f =
          y_lo + quadrature::gauss15(speed_integrand, t_lo, t) - y;
      const double step = f / dy_dtheta(t);
      t -= step;
      t = std::clamp(t, t_lo, t_hi);
      if (std::abs(step) < 1e-13) break;
    }
    return t;
  }

 private:
  double a_;
  std::array<double, kN + 1> ygrid_{};
};

const ThetaInverter& inverter() {
  static const ThetaInverter inv;
  return inv;
}

struct ThetaData {
  double theta;      // reduced to [0, 2 pi)
  double dtheta;     // dtheta/dy = sqrt(3 + sin^2 theta)
  double ddtheta;    // sin theta cos theta
};

ThetaData theta_data(double y) {
  const double a = inverter().period();
  double rem = std::fmod(y, a);
  if (rem < 0.0) rem += a;
  if (rem >= a) rem = 0.0;
  ThetaData d;
  d.theta = inverter().theta_in_turn(rem);
  const double s = std::sin(d.theta), c = std::cos(d.theta);
  d.dtheta = std::sqrt(3.0 + s * s);
  d.ddtheta = s * c;
  return d;
}

const double kSqrt58 = std::sqrt(5.0 / 8.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

const specfun::WeierstrassP& wp_phi0() {
  static const specfun::WeierstrassP w(
      specfun::WeierstrassInvariants{73.0 / 12.0, -595.0 / 216.0});
  return w;
}
const specfun::WeierstrassP& wp_phi1() {
  static const specfun::WeierstrassP w(
      specfun::WeierstrassInvariants{-8.0 / 3.0, 28.0 / 27.0});
  return w;
}
const specfun::WeierstrassP& wp_phi2() {
  static const specfun::WeierstrassP w(
      specfun::WeierstrassInvariants{193.0 / 12.0, 2681.0 / 216.0});
  return w;
}

}  // namespace

double period_a() { return inverter().period(); }

double y_of_theta(double theta) {
  const double turns = std::floor(theta / kTwoPi);
  const double r = theta - kTwoPi * turns;
  double y = turns * inverter().period();
  if (r > 0.0) {
    y += quadrature::integrate(speed_integrand, 0.0, r, 1e-13);
  }
  return y;
}

double theta_of_y(double y) {
  const double a = inverter().period();
  const double turns = std::floor(y / a);
  double rem = y - turns * a;
  if (rem < 0.0) rem = 0.0;
  if (rem >= a) rem = std::nextafter(a, 0.0);
  return kTwoPi * turns + inverter().theta_in_turn(rem);
}

PhiTriple phi_closed_form(double y) {
  const auto d = theta_data(y);
  PhiTriple p;
  p.phi0 = kSqrt58 * std::cos(d.theta);
  p.phi1 = kInvSqrt2 * std::sin(d.theta);
  p.phi2 = 0.5 * std::sqrt(1.5 + p.phi1 * p.phi1);
  return p;
}

PhiTriple phi_weierstrass(double y) {
  const double quarter = 0.5 * specfun::complete_K(0.5);
  PhiTriple p;
  p.phi0 = kSqrt58 * wp_phi0().rational(y, 12.0, -19.0, 12.0, -1.0);
  p.phi1 = kInvSqrt2 *
           wp_phi1().rational(y + quarter, -1.0, 4.0 / 3.0, 1.0, 2.0 / 3.0);
  const double s38 = std::sqrt(3.0 / 8.0);
  p.phi2 = wp_phi2().rational(y, s38,
                              s38 * 11.0 / 12.0 + std::sqrt(1.5) / 4.0, 1.0,
                              11.0 / 12.0);
  return p;
}

PhiTriple phi_derivatives(double y) {
  const auto d = theta_data(y);
  const double s = std::sin(d.theta), c = std::cos(d.theta);
  PhiTriple v;
  v.phi0 = -kSqrt58 * s * d.dtheta;
  v.phi1 = kInvSqrt2 * c * d.dtheta;
  const double phi1 = kInvSqrt2 * s;
  const double phi2 = 0.5 * std::sqrt(1.5 + phi1 * phi1);
  v.phi2 = phi1 * v.phi1 / (4.0 * phi2);
  return v;
}

double lambda_f(double y) {
  const double s = std::sin(theta_data(y).theta);
  return 3.0 + 2.0 * s * s;
}

MetricProfile::MetricProfile(int n) : n_(n), a_(period_a()) {
  if (n < 16 || n % 2 != 0) {
    throw std::domain_error("metric profile grid must be even and >= 16");
  }
  values_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    values_.push_back(lambda_f(node(i)));
  }
}

double MetricProfile::node(int i) const {
  return a_ * static_cast<double>(i) / static_cast<double>(n_);
}

double MetricProfile::operator()(double y) const { return lambda_f(y); }

MetricProfile metric_profile(int n) { return MetricProfile(n); }

LambdaAreaBreakdown lambda_area_pipelines() {
  LambdaAreaBreakdown b;
  b.quadrature = kTwoPi * quadrature::integrate(
                              [](double t) {
                                const double c2 = std::cos(t) * std::cos(t);
                                return (2.5 - c2) / std::sqrt(4.0 - c2);
                              },
                              0.0, kTwoPi, 1e-13);
  b.elliptic_combination =
      kTwoPi * (8.0 * specfun::complete_E(0.5) -
                3.0 * specfun::complete_K(0.5));
  b.elliptic_e =
      12.0 * kPi * specfun::complete_E(2.0 * std::sqrt(2.0) / 3.0);
  return b;
}

double lambda_area() {
  const auto b = lambda_area_pipelines();
  if (std::abs(b.quadrature - b.elliptic_combination) > 1e-10 ||
      std::abs(b.quadrature - b.elliptic_e) > 1e-10) {
    throw NumericalError("eigenvalue-area pipelines disagree");
  }
  return b.quadrature;
}

EmbeddingPoint embed(double x, double y) {
  const auto p = phi_closed_form(y);
  EmbeddingPoint e;
  e.x = x;
  e.y = y;
  e.coords = {p.phi0, p.phi1 * std::cos(x), p.phi1 * std::sin(x),
              p.phi2 * std::cos(2.0 * x), p.phi2 * std::sin(2.0 * x)};
  return e;
}

std::array<double, 5> embed_dx(double x, double y) {
  const auto p = phi_closed_form(y);
  return {0.0, -p.phi1 * std::sin(x), p.phi1 * std::cos(x),
          -2.0 * p.phi2 * std::sin(2.0 * x), 2.0 * p.phi2 * std::cos(2.0 * x)};
}

std::array<double, 5> embed_dy(double x, double y) {
  const auto v = phi_derivatives(y);
  return {v.phi0, v.phi1 * std::cos(x), v.phi1 * std::sin(x),
          v.phi2 * std::cos(2.0 * x), v.phi2 * std::sin(2.0 * x)};
}

double eigen_residual(double x, double y) {
  const auto d = theta_data(y);
  const double s = std::sin(d.theta), c = std::cos(d.theta);
  const double dth2 = d.dtheta * d.dtheta;  // 3 + sin^2 theta

  const double phi0 = kSqrt58 * c;
  const double phi1 = kInvSqrt2 * s;
  const double phi2 = 0.5 * std::sqrt(1.5 + phi1 * phi1);
  const double dphi1 = kInvSqrt2 * c * d.dtheta;

  const double ddphi0 = kSqrt58 * (-c * dth2 - s * d.ddtheta);
  const double ddphi1 = kInvSqrt2 * (-s * dth2 + c * d.ddtheta);
  const double ddphi2 = (dphi1 * dphi1 + phi1 * ddphi1) / (4.0 * phi2) -
                        (phi1 * dphi1) * (phi1 * dphi1) /
                            (16.0 * phi2 * phi2 * phi2);

  const double lf = 3.0 + 2.0 * s * s;
  const double r0 = std::abs(ddphi0 + lf * phi0);
  const double r1 = std::abs(ddphi1 - (1.0 - lf) * phi1);
  const double r2 = std::abs(ddphi2 - (4.0 - lf) * phi2);

  const double rx1 = std::max(std::abs(std::cos(x)), std::abs(std::sin(x)));
  const double rx2 =
      std::max(std::abs(std::cos(2.0 * x)), std::abs(std::sin(2.0 * x)));
  return std::max({r0, r1 * rx1, r2 * rx2}) / lf;
}

}  // namespace kleinx::extremal
