#pragma once

#include <array>
#include <vector>

namespace kleinx::extremal {

// Period of the profile in y.
double period_a();

// Arclength ordinate of the pendulum angle: y = (1/2) * integral over
// [0, theta] of dt / sqrt(1 - cos^2(t)/4), extended to all theta by
// y(theta + 2 pi) = y(theta) + a.  Strictly increasing.
double y_of_theta(double theta);

// Monotone inverse of y_of_theta.
double theta_of_y(double y);

struct PhiTriple {
  double phi0 = 0.0, phi1 = 0.0, phi2 = 0.0;
};

// Primary evaluation path: invert y_of_theta, then
// phi0 = sqrt(5/8) cos(theta), phi1 = sin(theta)/sqrt(2),
// phi2 = sqrt(3/2 + phi1^2)/2.
PhiTriple phi_closed_form(double y);

// Secondary path through Weierstrass P quotients; agrees with the primary
// path to ~1e-12.
PhiTriple phi_weierstrass(double y);

// Analytic y-derivatives of the closed form.
PhiTriple phi_derivatives(double y);

// Conformal factor lambda_f(y) = 5 - (16/5) phi0^2 = 3 + 2 sin^2(theta).
double lambda_f(double y);

// Uniform samples of lambda_f over one period [0, a).
class MetricProfile {
 public:
  explicit MetricProfile(int n);

  int size() const { return n_; }
  double period() const { return a_; }
  double node(int i) const;
  double value(int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  double operator()(double y) const;  // closed-form evaluator

 private:
  int n_ = 0;
  double a_ = 0.0;
  std::vector<double> values_;
};

MetricProfile metric_profile(int n);

struct LambdaAreaBreakdown {
  double quadrature = 0.0;            // direct theta-integral route
  double elliptic_combination = 0.0;  // 2 pi (8 E(1/2) - 3 K(1/2))
  double elliptic_e = 0.0;            // 12 pi E(2 sqrt(2)/3)
};

// The eigenvalue-area product along three independent pipelines; the free
// function returns the quadrature value after checking mutual agreement.
LambdaAreaBreakdown lambda_area_pipelines();
double lambda_area();

struct EmbeddingPoint {
  double x = 0.0, y = 0.0;
  std::array<double, 5> coords{};
};

// The unit-sphere immersion (phi0, phi1 cos x, phi1 sin x, phi2 cos 2x,
// phi2 sin 2x); invariant under (x, y) -> (x + pi, -y).
EmbeddingPoint embed(double x, double y);

// x- and y-partials of the immersion, analytic.
std::array<double, 5> embed_dx(double x, double y);
std::array<double, 5> embed_dy(double x, double y);

// Worst violation of the eigenfunction equation over the five components at
// one point, evaluated with analytic second derivatives.
double eigen_residual(double x, double y);

}  // namespace kleinx::extremal
