#include "kleinx/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kleinx/errors.hpp"
#include "kleinx/parallel.hpp"
#include "kleinx/rootfind.hpp"
#include "kleinx/systems.hpp"

namespace kleinx::sweep {
namespace {

const double kRotationLimit = std::sqrt(3.0) / 2.0;

void check_rotation_parameter(double p) {
  if (!(p > 0.0) || !(p < kRotationLimit)) {
    throw std::domain_error(
        "shooting parameter must lie in (0, sqrt(3)/2)");
  }
}

// Lift a reduced {phi0, phi1, dphi0, dphi1} state back to the sphere using
// |phi| = 1 and phi . phi' = 0 with phi2 > 0 (valid in the rotation window).
systems::PhiState lift_reduced(double y, const odeint::State& s) {
  const double r2 = std::max(0.0, 1.0 - s[0] * s[0] - s[1] * s[1]);
  systems::PhiState full;
  full.y = y;
  full.phi0 = s[0];
  full.phi1 = s[1];
  full.phi2 = std::sqrt(r2);
  full.dphi0 = s[2];
  full.dphi1 = s[3];
  full.dphi2 = full.phi2 > 1e-12
                   ? -(s[0] * s[2] + s[1] * s[3]) / full.phi2
                   : 0.0;
  return full;
}

struct Shot {
  odeint::Trajectory trajectory;
  double y_half;
  odeint::State state;
};

Shot shoot(double p, double y_max) {
  check_rotation_parameter(p);
  if (!(y_max > 0.0)) {
    throw std::domain_error("y_max must be positive");
  }
  const auto init = systems::initial_state(p);
  const odeint::State s0 = {init.phi0, init.phi1, init.dphi0, init.dphi1};

  odeint::EventSpec ev;
  ev.fn = [](double, const odeint::State& s) { return s[1]; };
  ev.direction = odeint::Direction::falling;
  ev.tol_y = 1e-12;

  double span = std::min(6.0, y_max);
  while (true) {
    auto traj = odeint::integrate(systems::ode_rhs_syst01(), 0.0, s0, span);
    for (const auto& e : odeint::find_events(traj, ev)) {
      if (e.y > 1e-9) {
        return {std::move(traj), e.y, e.state};
      }
    }
    if (span >= y_max) break;
    span = std::min(4.0 * span, y_max);
  }
  throw NumericalError("no half-period crossing before y_max");
}

double closed_form_e1(double p) {
  return (4.0 / 3.0) * p * p * (4.0 * p * p - 3.0);
}

}  // namespace

Crossing half_period_crossing(double p, double y_max) {
  auto shot = shoot(p, y_max);
  return {shot.y_half, std::move(shot.state)};
}

double cot_alpha(double p, double y_max) {
  const auto cross = half_period_crossing(p, y_max);
  return cross.state[2] / cross.state[3];
}

SweepRecord sweep_point(double p, double y_max) {
  check_rotation_parameter(p);
  SweepRecord rec;
  rec.p = p;
  try {
    const auto shot = shoot(p, y_max);
    rec.y_half = shot.y_half;
    rec.cot_alpha = shot.state[2] / shot.state[3];

    const auto fi =
        systems::first_integrals(lift_reduced(shot.y_half, shot.state));
    rec.e0 = fi.e0;
    rec.e1 = fi.e1;
    rec.e2 = fi.e2;

    constexpr int kSamples = 1024;
    double min_r2 = std::numeric_limits<double>::infinity();
    double min_absw = min_r2;
    bool one_sign = true;
    double first_sign = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double y = shot.y_half * i / kSamples;
      const auto s = shot.trajectory.eval(y);
      min_r2 = std::min(min_r2, 1.0 - s[0] * s[0] - s[1] * s[1]);
      const double w = s[1] * s[2] - s[0] * s[3];
      min_absw = std::min(min_absw, std::abs(w));
      if (first_sign == 0.0 && w != 0.0) first_sign = w > 0.0 ? 1.0 : -1.0;
      if (w * first_sign < 0.0) one_sign = false;
    }
    rec.phi2_positive = min_r2 > 1e-12;
    rec.wronskian_nonzero = min_absw > 1e-9;
    rec.rotation_ok = one_sign && rec.wronskian_nonzero;
  } catch (const NumericalError& err) {
    rec = SweepRecord{};
    rec.p = p;
    rec.error = err.what();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(double p_min, double p_max, int steps,
                                   int workers, double y_max) {
  check_rotation_parameter(p_min);
  check_rotation_parameter(p_max);
  if (!(p_min < p_max)) {
    throw std::domain_error("grid endpoints must satisfy p_min < p_max");
  }
  if (steps < 1) {
    throw std::domain_error("grid needs at least one step");
  }

  std::vector<SweepRecord> records(static_cast<std::size_t>(steps));
  parallel::parallel_for(steps, workers, [&](int i) {
    const double p =
        steps == 1 ? p_min
                   : p_min + (p_max - p_min) * i / (steps - 1.0);
    records[static_cast<std::size_t>(i)] = sweep_point(p, y_max);
  });
  return records;
}

double default_p_min() { return std::sqrt(3.0) / 2000.0; }
double default_p_max() { return 999.0 * std::sqrt(3.0) / 2000.0; }

std::vector<SweepRecord> default_sweep(int workers) {
  return run_sweep(default_p_min(), default_p_max(), 999, workers);
}

SweepAnalysis analyze(const std::vector<SweepRecord>& records) {
  std::vector<const SweepRecord*> valid;
  for (const auto& r : records) {
    if (r.error.empty()) valid.push_back(&r);
  }
  if (valid.size() < 3) {
    throw std::domain_error("analysis needs at least three valid records");
  }

  SweepAnalysis an;
  for (std::size_t i = 0; i + 1 < valid.size(); ++i) {
    const double a = valid[i]->cot_alpha;
    const double b = valid[i + 1]->cot_alpha;
    if (a * b < 0.0) {
      if (an.sign_changes == 0) {
        an.bracket_lo = valid[i]->p;
        an.bracket_hi = valid[i + 1]->p;
      }
      ++an.sign_changes;
    }
  }
  if (an.sign_changes > 0) {
    an.refined_root = rootfind::bisect_root(
        [](double p) { return cot_alpha(p); }, an.bracket_lo, an.bracket_hi,
        1e-8);
  }
  for (std::size_t i = 0; i + 2 < valid.size(); ++i) {
    const double d1 = valid[i + 1]->cot_alpha - valid[i]->cot_alpha;
    const double d2 = valid[i + 2]->cot_alpha - valid[i + 1]->cot_alpha;
    if (d1 * d2 < 0.0) ++an.monotonicity_violations;
  }
  return an;
}

RuleOutRecord rule_out_upper(double p, double y_max) {
  if (!(p > kRotationLimit) || !(p < 1.0)) {
    throw std::domain_error(
        "rule-out parameter must lie in (sqrt(3)/2, 1)");
  }
  if (!(y_max > 0.0)) {
    throw std::domain_error("y_max must be positive");
  }

  RuleOutRecord rec;
  rec.p = p;
  rec.e1 = closed_form_e1(p);
  rec.e2 = -0.25 * rec.e1;
  rec.e_signs_ok = rec.e1 > 0.0 && rec.e2 < 0.0;

  const auto init = systems::initial_state(p);
  const auto s0 = systems::to_ode_state(init);
  const auto traj =
      odeint::integrate(systems::ode_rhs_full(), 0.0, s0, y_max);

  odeint::EventSpec phi2_zero;
  phi2_zero.fn = [](double, const odeint::State& s) { return s[2]; };
  const auto zeros = odeint::find_events(traj, phi2_zero);
  if (!zeros.empty()) {
    rec.phi2_sign_change = true;
    rec.phi2_first_zero = zeros.front().y;
  }

  // Stationary points of the chart-A angle: phi2 phi1' - phi1 phi2' = 0.
  odeint::EventSpec stationary;
  stationary.fn = [](double, const odeint::State& s) {
    return s[2] * s[4] - s[1] * s[5];
  };
  for (const auto& e : odeint::find_events(traj, stationary)) {
    const auto state = systems::from_ode_state(e.y, e.state);
    try {
      const auto chart = systems::to_spherical_A(state);
      const double m1 = std::abs(systems::e1_spherical_A(chart) - rec.e1);
      const double m2 = std::abs(systems::e2_spherical_A(chart) - rec.e2);
      rec.max_e_mismatch = std::max({rec.max_e_mismatch, m1, m2});
      ++rec.theta_stationary_count;
    } catch (const NumericalError&) {
      // chart singularity at the poles; the event carries no chart data
    }
  }

  double closure = std::numeric_limits<double>::infinity();
  const auto& nodes = traj.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0.5) continue;
    const auto& s = traj.states()[i];
    double d2 = 0.0;
    for (std::size_t c = 0; c < 6; ++c) {
      const double diff = s[c] - s0[c];
      d2 += diff * diff;
    }
    closure = std::min(closure, std::sqrt(d2));
  }
  rec.closure_distance = closure;
  rec.falsified = !rec.phi2_sign_change && closure < 1e-6;
  return rec;
}

IntervalRecord interval_checks(double p, double y_max) {
  check_rotation_parameter(p);

  IntervalRecord rec;
  rec.p = p;
  rec.e1 = closed_form_e1(p);
  rec.e2 = -0.25 * rec.e1;
  rec.e0 = 1.0 - 0.75 * rec.e1;

  const auto cross = half_period_crossing(p, y_max);
  rec.y_window = 2.0 * cross.y_half;

  const auto init = systems::initial_state(p);
  const auto traj = odeint::integrate(systems::ode_rhs_full(), 0.0,
                                      systems::to_ode_state(init),
                                      rec.y_window);

  constexpr int kSamples = 4096;
  double min_phi2 = std::numeric_limits<double>::infinity();
  double max_phi2 = -min_phi2;
  double min_absw = std::numeric_limits<double>::infinity();
  bool one_sign = true;
  double first_sign = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double y = rec.y_window * i / kSamples;
    const auto s = traj.eval(y);
    min_phi2 = std::min(min_phi2, s[2]);
    max_phi2 = std::max(max_phi2, s[2]);
    const double w = s[1] * s[3] - s[0] * s[4];
    min_absw = std::min(min_absw, std::abs(w));
    if (first_sign == 0.0 && w != 0.0) first_sign = w > 0.0 ? 1.0 : -1.0;
    if (w * first_sign < 0.0) one_sign = false;
  }

  rec.min_phi2 = min_phi2;
  rec.max_phi2 = max_phi2;
  rec.min_wronskian = min_absw;
  rec.phi2_positive = min_phi2 > 1e-9;
  rec.phi2_below_one = max_phi2 < 1.0 - 1e-6;
  rec.wronskian_nonzero = min_absw > 1e-9;
  rec.rotation_single_signed = one_sign && rec.wronskian_nonzero;
  rec.ok = rec.phi2_positive && rec.phi2_below_one &&
           rec.wronskian_nonzero && rec.rotation_single_signed;
  return rec;
}

}  // namespace kleinx::sweep
