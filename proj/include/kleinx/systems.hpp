#pragma once

#include <array>

#include "kleinx/odeint.hpp"

namespace kleinx::systems {

// State on the constraint sphere: amplitudes and their y-derivatives.
struct PhiState {
  double y = 0.0;
  double phi0 = 0.0, phi1 = 0.0, phi2 = 0.0;
  double dphi0 = 0.0, dphi1 = 0.0, dphi2 = 0.0;
};

// Conserved quantities of the coupled system, in both published forms.
struct FirstIntegrals {
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  double kappa0 = 0.0, kappa1 = 0.0, kappa2 = 0.0;
};

// Chart A places the pole at phi0 = cos(psi), with theta the angle in the
// (phi2, phi1) plane.
struct SphericalA {
  double psi = 0.0, theta = 0.0;
  double dpsi = 0.0, dtheta = 0.0;
};

// Shooting initial data: phi = (sqrt(1-p^2), 0, p), dphi = (0, 2p, 0).
PhiState initial_state(double p);

// Conversions between PhiState and the flat integrator layout
// {phi0, phi1, phi2, dphi0, dphi1, dphi2}.
odeint::State to_ode_state(const PhiState& s);
PhiState from_ode_state(double y, const odeint::State& s);

// Conformal factor lambda_f = 2(phi1^2 + 4 phi2^2) read off a state.
double lambda_f(const PhiState& s);

// Full three-component second-order system, flattened to first order:
// phi0'' = -lambda_f phi0, phi1'' = (1-lambda_f) phi1,
// phi2'' = (4-lambda_f) phi2.  The two-argument form takes the metric
// factor as given; the one-argument form substitutes lambda_f(s).
std::array<double, 6> rhs_full(const PhiState& s, double metric_value);
std::array<double, 6> rhs_full(const PhiState& s);

// Reduced pair systems.
std::array<double, 4> rhs_syst12(double phi1, double phi2, double dphi1,
                                 double dphi2);
std::array<double, 4> rhs_syst01(double phi0, double phi1, double dphi0,
                                 double dphi1);

// Integrator adapters.  State layouts: full {phi0,phi1,phi2,dphi0,dphi1,dphi2};
// syst12 {phi1,phi2,dphi1,dphi2}; syst01 {phi0,phi1,dphi0,dphi1};
// sweep (theta as independent variable) {psi, dpsi/dtheta, y}.
const odeint::Rhs& ode_rhs_full();
const odeint::Rhs& ode_rhs_syst12();
const odeint::Rhs& ode_rhs_syst01();
const odeint::Rhs& ode_rhs_sweep();

FirstIntegrals first_integrals(const PhiState& s);

// E1 expressed through the conserved quadratic of the reduced (1,2) system.
double e1_from_syst12(double phi1, double phi2, double dphi1, double dphi2);

// Chart A transforms.
SphericalA to_spherical_A(const PhiState& s);
PhiState from_spherical_A(const SphericalA& a, double y);
double e1_spherical_A(const SphericalA& a);
double e2_spherical_A(const SphericalA& a);

// Chart B (pole at phi2 = cos psi, theta the angle in the (phi0, phi1)
// plane) with theta promoted to the independent variable.  Arguments are the
// chart variables; the result is {dpsi/dtheta, d(dpsi/dtheta)/dtheta,
// dy/dtheta}.
std::array<double, 3> rhs_sweep_param(double psi, double theta,
                                      double dpsi_dtheta);
odeint::State sweep_initial(double p);
PhiState chart_B_state(double theta, double psi, double dpsi_dtheta, double y);

// Sign changes of one amplitude over the half-open window [begin, end).
int count_zeros(const odeint::Trajectory& traj, int component,
                double window_begin, double window_end);

// Closed-form heteroclinic solution at p = sqrt(3)/2 and the residual of
// substituting it into the reduced (0,1) system.
std::array<double, 2> separatrix_solution(double y);
double separatrix_residual(double y);

}  // namespace kleinx::systems
