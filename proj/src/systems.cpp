#include "kleinx/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kleinx::systems {

PhiState initial_state(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("shooting parameter must satisfy 0 < p < 1");
  }
  PhiState s;
  s.y = 0.0;
  s.phi0 = std::sqrt((1.0 - p) * (1.0 + p));
  s.phi1 = 0.0;
  s.phi2 = p;
  s.dphi0 = 0.0;
  s.dphi1 = 2.0 * p;
  s.dphi2 = 0.0;
  return s;
}

odeint::State to_ode_state(const PhiState& s) {
  return {s.phi0, s.phi1, s.phi2, s.dphi0, s.dphi1, s.dphi2};
}

PhiState from_ode_state(double y, const odeint::State& s) {
  if (s.size() != 6) {
    throw std::domain_error("full state must have dimension 6");
  }
  return PhiState{y, s[0], s[1], s[2], s[3], s[4], s[5]};
}

double lambda_f(const PhiState& s) {
  return 2.0 * (s.phi1 * s.phi1 + 4.0 * s.phi2 * s.phi2);
}

std::array<double, 6> rhs_full(const PhiState& s, double metric_value) {
  return {s.dphi0,
          s.dphi1,
          s.dphi2,
          -metric_value * s.phi0,
          (1.0 - metric_value) * s.phi1,
          (4.0 - metric_value) * s.phi2};
}

std::array<double, 6> rhs_full(const PhiState& s) {
  return rhs_full(s, lambda_f(s));
}

std::array<double, 4> rhs_syst12(double phi1, double phi2, double dphi1,
                                 double dphi2) {
  const double q = 2.0 * phi1 * phi1 + 8.0 * phi2 * phi2;
  return {dphi1, dphi2, (1.0 - q) * phi1, (4.0 - q) * phi2};
}

std::array<double, 4> rhs_syst01(double phi0, double phi1, double dphi0,
                                 double dphi1) {
  const double q = 8.0 * phi0 * phi0 + 6.0 * phi1 * phi1;
  return {dphi0, dphi1, (q - 8.0) * phi0, (q - 7.0) * phi1};
}

const odeint::Rhs& ode_rhs_full() {
  static const odeint::Rhs rhs = [](double y, const odeint::State& s,
                                    odeint::State& ds) {
    const auto d = rhs_full(from_ode_state(y, s));
    std::copy(d.begin(), d.end(), ds.begin());
  };
  return rhs;
}

const odeint::Rhs& ode_rhs_syst12() {
  static const odeint::Rhs rhs = [](double, const odeint::State& s,
                                    odeint::State& ds) {
    const auto d = rhs_syst12(s[0], s[1], s[2], s[3]);
    std::copy(d.begin(), d.end(), ds.begin());
  };
  return rhs;
}

const odeint::Rhs& ode_rhs_syst01() {
  static const odeint::Rhs rhs = [](double, const odeint::State& s,
                                    odeint::State& ds) {
    const auto d = rhs_syst01(s[0], s[1], s[2], s[3]);
    std::copy(d.begin(), d.end(), ds.begin());
  };
  return rhs;
}

FirstIntegrals first_integrals(const PhiState& s) {
  const double w01 = s.phi0 * s.dphi1 - s.phi1 * s.dphi0;
  const double w02 = s.phi0 * s.dphi2 - s.phi2 * s.dphi0;
  const double w12 = s.phi1 * s.dphi2 - s.phi2 * s.dphi1;

  FirstIntegrals fi;
  fi.e0 = s.phi0 * s.phi0 + w01 * w01 + w02 * w02 / 4.0;
  fi.e1 = s.phi1 * s.phi1 + w12 * w12 / 3.0 - w01 * w01;
  fi.e2 = s.phi2 * s.phi2 - w02 * w02 / 4.0 - w12 * w12 / 3.0;

  const double p0 = s.phi0 * s.phi0, p1 = s.phi1 * s.phi1,
               p2 = s.phi2 * s.phi2;
  const double v0 = s.dphi0 * s.dphi0, v1 = s.dphi1 * s.dphi1,
               v2 = s.dphi2 * s.dphi2;
  fi.kappa0 = v1 + 4.0 * v2 + (p1 + 4.0 * p2) * (p1 + 4.0 * p2) - p1 -
              16.0 * p2;
  fi.kappa1 = v0 - 3.0 * v2 + 2.0 * p0 + 6.0 * p2 -
              (p0 - 3.0 * p2) * (p0 - 3.0 * p2);
  fi.kappa2 = 4.0 * v0 + 3.0 * v1 + 32.0 * p0 + 21.0 * p1 -
              (4.0 * p0 + 3.0 * p1) * (4.0 * p0 + 3.0 * p1);
  return fi;
}

double e1_from_syst12(double phi1, double phi2, double dphi1, double dphi2) {
  const double p1 = phi1 * phi1, p2 = phi2 * phi2;
  const double kappa0 = dphi1 * dphi1 + 4.0 * dphi2 * dphi2 +
                        (p1 + 4.0 * p2) * (p1 + 4.0 * p2) - p1 - 16.0 * p2;
  return kappa0 / 3.0;
}

SphericalA to_spherical_A(const PhiState& s) {
  const double sin_psi = std::hypot(s.phi1, s.phi2);
  if (sin_psi < 1e-12) {
    throw NumericalError("coordinate singularity: phi1 = phi2 = 0");
  }
  SphericalA a;
  a.psi = std::atan2(sin_psi, s.phi0);
  a.theta = std::atan2(s.phi1, s.phi2);
  a.dpsi = -s.dphi0 / sin_psi;
  const double ct = s.phi2 / sin_psi, st = s.phi1 / sin_psi;
  a.dtheta = (s.dphi1 * ct - s.dphi2 * st) / sin_psi;
  return a;
}

PhiState from_spherical_A(const SphericalA& a, double y) {
  const double sp = std::sin(a.psi), cp = std::cos(a.psi);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  PhiState s;
  s.y = y;
  s.phi0 = cp;
  s.phi1 = sp * st;
  s.phi2 = sp * ct;
  s.dphi0 = -sp * a.dpsi;
  s.dphi1 = cp * a.dpsi * st + sp * ct * a.dtheta;
  s.dphi2 = cp * a.dpsi * ct - sp * st * a.dtheta;
  return s;
}

double e1_spherical_A(const SphericalA& a) {
  const double sp = std::sin(a.psi), s2p = std::sin(2.0 * a.psi);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double s2t = std::sin(2.0 * a.theta);
  const double dp = a.dpsi, dt = a.dtheta;
  return st * st * (sp * sp - dp * dp) - dp * dt * s2p * s2t / 2.0 +
         dt * dt * sp * sp * sp * sp / 3.0 -
         (dt * ct * s2p / 2.0) * (dt * ct * s2p / 2.0);
}

double e2_spherical_A(const SphericalA& a) {
  const double sp = std::sin(a.psi), s2p = std::sin(2.0 * a.psi);
  const double st = std::sin(a.theta), ct = std::cos(a.theta);
  const double s2t = std::sin(2.0 * a.theta);
  const double dp = a.dpsi, dt = a.dtheta;
  return ct * ct * (sp * sp - dp * dp / 4.0) + dp * dt * s2p * s2t / 8.0 -
         dt * dt * sp * sp * sp * sp / 3.0 -
         (dt * st * s2p / 4.0) * (dt * st * s2p / 4.0);
}

std::array<double, 3> rhs_sweep_param(double psi, double theta,
                                      double dpsi_dtheta) {
  const double sp = std::sin(psi), cp = std::cos(psi);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double w = dpsi_dtheta;

  // Angular speed from the energy constraint |phi'|^2 = lambda_f / 2.
  const double speed2 =
      (sp * sp * st * st + 4.0 * cp * cp) / (w * w + sp * sp);
  if (!(speed2 > 1e-14)) {
    throw NumericalError(
        "rotation failure: dtheta/dy vanished (p outside the rotating "
        "interval)");
  }

  // Mechanical form of the (psi, theta) system, theta re-parametrized:
  //   psi''   = sin psi cos psi (theta'^2 + sin^2 theta - 4)
  //   theta'' = sin theta cos theta - 2 cot psi psi' theta'
  const double ddpsi_dt2 = sp * cp * (speed2 + st * st - 4.0);
  const double ddtheta_dt2 = st * ct - 2.0 * (cp / sp) * w * speed2;
  const double dw = (ddpsi_dt2 - w * ddtheta_dt2) / speed2;
  return {w, dw, 1.0 / std::sqrt(speed2)};
}

const odeint::Rhs& ode_rhs_sweep() {
  static const odeint::Rhs rhs = [](double theta, const odeint::State& s,
                                    odeint::State& ds) {
    const auto d = rhs_sweep_param(s[0], theta, s[1]);
    ds[0] = d[0];
    ds[1] = d[1];
    ds[2] = d[2];
  };
  return rhs;
}

odeint::State sweep_initial(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("shooting parameter must satisfy 0 < p < 1");
  }
  return {std::acos(p), 0.0, 0.0};
}

PhiState chart_B_state(double theta, double psi, double dpsi_dtheta,
                       double y) {
  const double sp = std::sin(psi), cp = std::cos(psi);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double w = dpsi_dtheta;
  const double speed2 =
      (sp * sp * st * st + 4.0 * cp * cp) / (w * w + sp * sp);
  const double dtheta_dy = std::sqrt(speed2);
  const double dpsi_dy = w * dtheta_dy;

  PhiState s;
  s.y = y;
  s.phi0 = sp * ct;
  s.phi1 = sp * st;
  s.phi2 = cp;
  s.dphi0 = cp * dpsi_dy * ct - sp * st * dtheta_dy;
  s.dphi1 = cp * dpsi_dy * st + sp * ct * dtheta_dy;
  s.dphi2 = -sp * dpsi_dy;
  return s;
}

int count_zeros(const odeint::Trajectory& traj, int component,
                double window_begin, double window_end) {
  if (component < 0 || component > 2) {
    throw std::domain_error("component must be 0, 1 or 2");
  }
  if (traj.dimension() != 6) {
    throw std::domain_error("zero counting expects the full 6-state");
  }
  if (traj.y_begin() > window_begin + 1e-12 ||
      traj.y_end() < window_end - 1e-12) {
    throw std::domain_error("trajectory does not span the window");
  }

  odeint::EventSpec ev;
  const std::size_t c = static_cast<std::size_t>(component);
  ev.fn = [c](double, const odeint::State& s) { return s[c]; };
  ev.tol_y = 1e-12;

  // Half-open window: a zero sitting on the right endpoint is the left
  // endpoint's zero of the next period and is not counted here.
  const double lo = window_begin - 1e-9;
  const double hi = window_end - 1e-6;
  int count = 0;
  for (const auto& e : odeint::find_events(traj, ev)) {
    if (e.y < lo || e.y >= hi) continue;
    if (std::abs(e.state[c]) < 1e-10 && std::abs(e.state[c + 3]) < 1e-10) {
      throw NumericalError(
          "degenerate zero: amplitude and derivative vanish together at y = " +
          std::to_string(e.y));
    }
    ++count;
  }
  return count;
}

std::array<double, 2> separatrix_solution(double y) {
  const double theta =
      std::numbers::pi - 4.0 * std::atan(std::exp(-y));
  return {(3.0 * std::cos(theta) - 1.0) / 4.0,
          std::sqrt(3.0) * std::sin(theta) / 2.0};
}

double separatrix_residual(double y) {
  const double theta = std::numbers::pi - 4.0 * std::atan(std::exp(-y));
  const double st = std::sin(theta), ct = std::cos(theta);
  // Pendulum relations satisfied by theta(y): theta'^2 = 2(1 + cos theta),
  // theta'' = -sin theta.
  const double dth2 = 2.0 * (1.0 + ct);
  const double ddth = -st;

  const double phi0 = (3.0 * ct - 1.0) / 4.0;
  const double phi1 = std::sqrt(3.0) * st / 2.0;
  const double ddphi0 = (3.0 / 4.0) * (-st * ddth - ct * dth2);
  const double ddphi1 = (std::sqrt(3.0) / 2.0) * (ct * ddth - st * dth2);

  const double q = 8.0 * phi0 * phi0 + 6.0 * phi1 * phi1;
  const double r0 = ddphi0 - (q - 8.0) * phi0;
  const double r1 = ddphi1 - (q - 7.0) * phi1;
  return std::max(std::abs(r0), std::abs(r1));
}

}  // namespace kleinx::systems
