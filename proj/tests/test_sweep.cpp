#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kleinx/errors.hpp"
#include "kleinx/odeint.hpp"
#include "kleinx/rootfind.hpp"
#include "kleinx/specfun.hpp"
#include "kleinx/sweep.hpp"
#include "kleinx/systems.hpp"

using namespace kleinx;

namespace {
const double kP38 = std::sqrt(3.0 / 8.0);

double closed_e1(double p) {
  return (4.0 / 3.0) * p * p * (4.0 * p * p - 3.0);
}
}  // namespace

TEST_CASE("half-period crossing ordinates against the shooting oracle") {
  struct Ref {
    double p, y_half;
  };
  const Ref refs[] = {{0.1, 2.1559507446}, {0.2, 1.8583638103},
                      {0.3, 1.7163604154}, {0.5, 1.6332327771},
                      {0.7, 1.8072070627}, {0.8, 2.1826358128}};
  for (const auto& r : refs) {
    const auto cross = sweep::half_period_crossing(r.p);
    CHECK(std::abs(cross.y_half - r.y_half) < 1e-7);
    CHECK(std::abs(cross.state[1]) < 1e-10);  // phi1 at the crossing
    CHECK(cross.state[0] < 0.0);              // half turn completed
    CHECK(cross.state[3] < 0.0);              // phi1 falling
  }

  // At the closed-form parameter the crossing sits exactly one quarter
  // period of the profile away from the start.
  const auto special = sweep::half_period_crossing(kP38);
  CHECK(std::abs(special.y_half - specfun::complete_K(0.5)) < 1e-8);
}

TEST_CASE("half-period crossing argument validation") {
  CHECK_THROWS_AS(sweep::half_period_crossing(0.0), std::domain_error);
  CHECK_THROWS_AS(sweep::half_period_crossing(-0.2), std::domain_error);
  CHECK_THROWS_AS(sweep::half_period_crossing(std::sqrt(3.0) / 2.0),
                  std::domain_error);
  CHECK_THROWS_AS(sweep::half_period_crossing(0.9), std::domain_error);
  CHECK_THROWS_AS(sweep::half_period_crossing(0.3, -1.0), std::domain_error);
  // Window too short to reach the crossing.
  CHECK_THROWS_AS(sweep::half_period_crossing(0.3, 1.0), NumericalError);
}

TEST_CASE("intersection slope: pinned values and the bracketing signs") {
  CHECK(std::abs(sweep::cot_alpha(kP38)) < 1e-8);
  CHECK(std::abs(sweep::cot_alpha(0.3) - 6.1028168237e-01) < 1e-8);
  CHECK(std::abs(sweep::cot_alpha(0.8) - (-5.0430106003e-01)) < 1e-7);
  CHECK(std::abs(sweep::cot_alpha(0.05) - 2.4056200504) < 1e-7);
  CHECK(std::abs(sweep::cot_alpha(0.85) - (-1.3215228014)) < 1e-7);
  CHECK(sweep::cot_alpha(0.3) > 0.0);
  CHECK(sweep::cot_alpha(0.8) < 0.0);
}

TEST_CASE("bisection of the slope recovers the closed-form parameter") {
  const double root = rootfind::bisect_root(
      [](double p) { return sweep::cot_alpha(p); }, 0.5, 0.7, 1e-8);
  CHECK(std::abs(root - kP38) < 1e-6);
}

TEST_CASE("slope is independent of the integrated formulation") {
  for (double p : {0.3, 0.55, 0.8}) {
    const auto cross = sweep::half_period_crossing(p);
    const double via_reduced = cross.state[2] / cross.state[3];

    // Full three-component flow, same event.
    const auto s0 = systems::to_ode_state(systems::initial_state(p));
    const auto traj =
        odeint::integrate(systems::ode_rhs_full(), 0.0, s0, 6.0);
    odeint::EventSpec ev;
    ev.fn = [](double, const odeint::State& s) { return s[1]; };
    ev.direction = odeint::Direction::falling;
    const auto events = odeint::find_events(traj, ev);
    REQUIRE(!events.empty());
    const auto& e = events.front();
    const double via_full = e.state[3] / e.state[4];
    CHECK(std::abs(e.y - cross.y_half) < 1e-8);
    CHECK(std::abs(via_full - via_reduced) < 1e-7);

    // Angle-parametrized chart: the crossing is theta = pi.
    const auto sweep_traj = odeint::integrate(
        systems::ode_rhs_sweep(), 0.0, systems::sweep_initial(p),
        std::numbers::pi);
    const auto end = sweep_traj.final_state();
    const double via_chart = std::cos(end[0]) / std::sin(end[0]) * end[1];
    CHECK(std::abs(end[2] - cross.y_half) < 1e-7);
    CHECK(std::abs(via_chart - via_reduced) < 1e-7);
  }
}

TEST_CASE("sweep records reconstruct the conserved energies") {
  for (double p : {0.2, 0.5, 0.75}) {
    const auto rec = sweep::sweep_point(p);
    CHECK(rec.error.empty());
    CHECK(rec.p == p);
    CHECK(rec.y_half > 0.0);

    const double e1 = closed_e1(p);
    CHECK(std::abs(rec.e1 - e1) < 1e-10);
    CHECK(std::abs(rec.e2 - (-0.25 * e1)) < 1e-10);
    CHECK(std::abs(rec.e0 - (1.0 - 0.75 * e1)) < 1e-10);

    const auto at_start = systems::first_integrals(systems::initial_state(p));
    CHECK(std::abs(rec.e0 - at_start.e0) < 1e-10);
    CHECK(std::abs(rec.e1 - at_start.e1) < 1e-10);
    CHECK(std::abs(rec.e2 - at_start.e2) < 1e-10);

    CHECK(rec.rotation_ok);
    CHECK(rec.phi2_positive);
    CHECK(rec.wronskian_nonzero);
  }
  CHECK_THROWS_AS(sweep::sweep_point(0.88), std::domain_error);
}

TEST_CASE("crossing state is a mirror fixed point of the flow") {
  for (double p : {0.25, 0.6}) {
    const auto cross = sweep::half_period_crossing(p);
    // Reflect across the phi0-axis and continue: the forward continuation
    // must retrace the incoming arc with phi1 negated.
    odeint::State reflected = cross.state;
    reflected[2] = -reflected[2];

    const auto forward = odeint::integrate(
        systems::ode_rhs_syst01(), cross.y_half, reflected,
        cross.y_half + 1.0);
    const auto s0 = systems::to_ode_state(systems::initial_state(p));
    const odeint::State s0r = {s0[0], s0[1], s0[3], s0[4]};
    const auto original = odeint::integrate(systems::ode_rhs_syst01(), 0.0,
                                            s0r, cross.y_half);
    for (double t : {0.1, 0.35, 0.8}) {
      const auto a = forward.eval(cross.y_half + t);
      const auto b = original.eval(cross.y_half - t);
      CHECK(std::abs(a[0] - b[0]) < 1e-8);
      CHECK(std::abs(a[1] + b[1]) < 1e-8);
      CHECK(std::abs(a[2] + b[2]) < 1e-8);
      CHECK(std::abs(a[3] - b[3]) < 1e-8);
    }
  }
}

TEST_CASE("coarse grid sweep: one sign change, no slope reversals") {
  const auto records = sweep::run_sweep(0.1, 0.8, 10, 2);
  REQUIRE(records.size() == 10);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].error.empty());
    if (i > 0) CHECK(records[i].p > records[i - 1].p);
  }
  const auto an = sweep::analyze(records);
  CHECK(an.sign_changes == 1);
  CHECK(an.monotonicity_violations == 0);
  CHECK(an.bracket_lo < kP38);
  CHECK(an.bracket_hi > kP38);
  CHECK(std::abs(an.refined_root - kP38) < 1e-6);
}

TEST_CASE("sweep output does not depend on the worker count") {
  const auto one = sweep::run_sweep(0.15, 0.75, 13, 1);
  const auto four = sweep::run_sweep(0.15, 0.75, 13, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].p == four[i].p);
    CHECK(one[i].y_half == four[i].y_half);
    CHECK(one[i].cot_alpha == four[i].cot_alpha);
    CHECK(one[i].e0 == four[i].e0);
    CHECK(one[i].e1 == four[i].e1);
    CHECK(one[i].e2 == four[i].e2);
  }
}

TEST_CASE("canonical grid endpoints and a mid-density slice") {
  CHECK(sweep::default_p_min() ==
        doctest::Approx(8.6602540378443865e-04).epsilon(1e-14));
  CHECK(sweep::default_p_max() ==
        doctest::Approx(0.86515937838065413).epsilon(1e-14));

  // A 99-point slice of the canonical grid shows the same picture.
  const double lo = 10.0 * std::sqrt(3.0) / 2000.0;
  const double hi = 990.0 * std::sqrt(3.0) / 2000.0;
  const auto records = sweep::run_sweep(lo, hi, 99, 4);
  const auto an = sweep::analyze(records);
  CHECK(an.sign_changes == 1);
  CHECK(an.monotonicity_violations == 0);
  CHECK(an.bracket_lo > 0.6120 - 0.02);
  CHECK(an.bracket_hi < 0.6127 + 0.02);
  CHECK(std::abs(an.refined_root - kP38) < 1e-6);
}

TEST_CASE("sweep analysis input validation and error skipping") {
  std::vector<sweep::SweepRecord> records;
  CHECK_THROWS_AS(sweep::analyze(records), std::domain_error);

  records = sweep::run_sweep(0.3, 0.8, 6, 1);
  const auto base = sweep::analyze(records);

  sweep::SweepRecord failed;
  failed.p = 0.55;
  failed.error = "synthetic failure";
  records.insert(records.begin() + 3, failed);
  const auto with_failure = sweep::analyze(records);
  CHECK(with_failure.sign_changes == base.sign_changes);
  CHECK(with_failure.monotonicity_violations == base.monotonicity_violations);
}

TEST_CASE("run_sweep argument validation") {
  CHECK_THROWS_AS(sweep::run_sweep(0.0, 0.5, 10), std::domain_error);
  CHECK_THROWS_AS(sweep::run_sweep(0.1, 0.87, 10), std::domain_error);
  CHECK_THROWS_AS(sweep::run_sweep(0.5, 0.3, 10), std::domain_error);
  CHECK_THROWS_AS(sweep::run_sweep(0.1, 0.5, 0), std::domain_error);
}

TEST_CASE("upper window: blocking energy signs and a vanishing amplitude") {
  struct Ref {
    double p, first_zero;
  };
  const Ref refs[] = {{0.87, 2.182124}, {0.90, 1.562226},
                      {0.95, 1.252356}, {0.99, 1.107656}};
  for (const auto& r : refs) {
    const auto rec = sweep::rule_out_upper(r.p);
    CHECK(rec.e1 == doctest::Approx(closed_e1(r.p)).epsilon(1e-14));
    CHECK(rec.e2 == doctest::Approx(-0.25 * closed_e1(r.p)).epsilon(1e-14));
    CHECK(rec.e_signs_ok);
    CHECK(rec.e1 > 0.0);
    CHECK(rec.e2 < 0.0);
    CHECK(rec.phi2_sign_change);
    CHECK(std::abs(rec.phi2_first_zero - r.first_zero) < 1e-5);
    // The chart angle advances monotonically here, so no stationary points
    // turn up and the contradiction mechanism never gets a foothold.
    CHECK(rec.theta_stationary_count == 0);
    CHECK(rec.max_e_mismatch == 0.0);
    CHECK_FALSE(rec.falsified);
    CHECK(rec.closure_distance > 1e-3);
  }
  CHECK(sweep::rule_out_upper(0.9).e1 == doctest::Approx(0.2592).epsilon(1e-12));
  CHECK(sweep::rule_out_upper(0.9).e2 ==
        doctest::Approx(-0.0648).epsilon(1e-12));

  CHECK_THROWS_AS(sweep::rule_out_upper(0.85), std::domain_error);
  CHECK_THROWS_AS(sweep::rule_out_upper(1.0), std::domain_error);
  CHECK_THROWS_AS(sweep::rule_out_upper(1.5), std::domain_error);
  CHECK_THROWS_AS(sweep::rule_out_upper(0.95, 0.0), std::domain_error);
}

TEST_CASE("chart-angle stationary events do occur in the rotation window") {
  // Counterpart of the zero count above: the same event function fires
  // many times for rotating orbits, so the detector is live.
  const auto s0 = systems::to_ode_state(systems::initial_state(0.3));
  const auto traj = odeint::integrate(systems::ode_rhs_full(), 0.0, s0, 20.0);
  odeint::EventSpec stationary;
  stationary.fn = [](double, const odeint::State& s) {
    return s[2] * s[4] - s[1] * s[5];
  };
  const auto events = odeint::find_events(traj, stationary);
  CHECK(events.size() >= 8);
}

TEST_CASE("rotation window: amplitude bounds and single-signed rotation") {
  struct Ref {
    double p, min_phi2, min_w;
  };
  const Ref refs[] = {{0.1, 0.1, 0.198997},
                      {0.3, 0.3, 0.572364},
                      {0.5, 0.5, 0.866025},
                      {0.7, 0.529285, 0.898975},
                      {0.8, 0.344925, 0.654003}};
  for (const auto& r : refs) {
    const auto rec = sweep::interval_checks(r.p);
    CHECK(rec.ok);
    CHECK(rec.phi2_positive);
    CHECK(rec.phi2_below_one);
    CHECK(rec.wronskian_nonzero);
    CHECK(rec.rotation_single_signed);
    CHECK(std::abs(rec.min_phi2 - r.min_phi2) < 1e-5);
    CHECK(std::abs(rec.min_wronskian - r.min_w) < 1e-5);
    CHECK(rec.max_phi2 < 1.0 - 1e-6);
    CHECK(rec.y_window > 0.0);
    CHECK(std::abs(rec.e1 - closed_e1(r.p)) < 1e-14);
  }

  // The minimum of the third amplitude at the closed-form parameter is its
  // starting value.
  const auto special = sweep::interval_checks(kP38);
  CHECK(std::abs(special.min_phi2 - kP38) < 1e-6);
  CHECK(special.ok);

  // 0.85 is still inside the window; 0.87 is not.
  CHECK(sweep::interval_checks(0.85).ok);
  CHECK_THROWS_AS(sweep::interval_checks(0.87), std::domain_error);
}
