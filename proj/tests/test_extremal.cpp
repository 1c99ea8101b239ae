#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kleinx/extremal.hpp"
#include "kleinx/specfun.hpp"
#include "kleinx/systems.hpp"
#include "test_util.hpp"

using namespace kleinx;
using extremal::PhiTriple;

namespace {
constexpr double kPi = std::numbers::pi;

// Reference values, double-checked against high-precision arithmetic.
constexpr double kPeriodA = 3.3715007096251921;
constexpr double kLambdaArea = 41.987050357708431;
constexpr double kSqrt58 = 0.79056941504209488;
constexpr double kSqrt38 = 0.61237243569579447;

systems::PhiState phi_state(double y) {
  const auto p = extremal::phi_closed_form(y);
  const auto d = extremal::phi_derivatives(y);
  return {y, p.phi0, p.phi1, p.phi2, d.phi0, d.phi1, d.phi2};
}
}  // namespace

TEST_CASE("ordinate map hits the period and half-period exactly") {
  CHECK(extremal::period_a() == doctest::Approx(kPeriodA).epsilon(1e-15));
  CHECK(extremal::period_a() ==
        doctest::Approx(2.0 * specfun::complete_K(0.5)).epsilon(1e-15));

  CHECK(extremal::y_of_theta(0.0) == 0.0);
  CHECK(std::abs(extremal::y_of_theta(2.0 * kPi) - kPeriodA) < 1e-12);
  CHECK(std::abs(extremal::y_of_theta(kPi) - 0.5 * kPeriodA) < 1e-12);
}

TEST_CASE("ordinate map is quasi-periodic and strictly increasing") {
  auto rng = test_util::make_rng(41);
  for (int i = 0; i < 200; ++i) {
    const double th = test_util::uniform(rng, -9.0, 9.0);
    CHECK(std::abs(extremal::y_of_theta(th + 2.0 * kPi) -
                   extremal::y_of_theta(th) - kPeriodA) < 1e-12);
  }
  double prev = extremal::y_of_theta(-7.0);
  for (int i = 1; i <= 400; ++i) {
    const double cur = extremal::y_of_theta(-7.0 + 14.0 * i / 400.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("ordinate map derivative is 1/sqrt(4 - cos^2 theta)") {
  const double h = 1e-5;
  for (int i = 0; i <= 60; ++i) {
    const double th = -2.0 * kPi + 4.0 * kPi * i / 60.0;
    const double num =
        (extremal::y_of_theta(th + h) - extremal::y_of_theta(th - h)) /
        (2.0 * h);
    const double c = std::cos(th);
    CHECK(std::abs(num - 1.0 / std::sqrt(4.0 - c * c)) < 1e-9);
  }
}

TEST_CASE("angle recovery inverts the ordinate map over several turns") {
  CHECK(extremal::theta_of_y(0.0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(std::abs(extremal::theta_of_y(0.5 * kPeriodA) - kPi) < 1e-12);
  CHECK(std::abs(extremal::theta_of_y(kPeriodA) - 2.0 * kPi) < 1e-12);

  auto rng = test_util::make_rng(42);
  for (int i = 0; i < 400; ++i) {
    const double th = test_util::uniform(rng, -9.0, 9.0);
    CHECK(std::abs(extremal::theta_of_y(extremal::y_of_theta(th)) - th) <
          1e-11);
  }
}

TEST_CASE("profile endpoints match the closed form") {
  const auto p0 = extremal::phi_closed_form(0.0);
  CHECK(p0.phi0 == doctest::Approx(kSqrt58).epsilon(1e-13));
  CHECK(std::abs(p0.phi1) < 1e-13);
  CHECK(p0.phi2 == doctest::Approx(kSqrt38).epsilon(1e-13));

  const auto ph = extremal::phi_closed_form(0.5 * kPeriodA);
  CHECK(ph.phi0 == doctest::Approx(-kSqrt58).epsilon(1e-12));
  CHECK(std::abs(ph.phi1) < 1e-11);
  CHECK(ph.phi2 == doctest::Approx(kSqrt38).epsilon(1e-12));
}

TEST_CASE("closed-form and elliptic-quotient evaluations agree") {
  double worst = 0.0;
  for (int i = 0; i <= 600; ++i) {
    const double y = -kPeriodA + 3.0 * kPeriodA * i / 600.0;
    const auto c = extremal::phi_closed_form(y);
    const auto w = extremal::phi_weierstrass(y);
    worst = std::max({worst, std::abs(c.phi0 - w.phi0),
                      std::abs(c.phi1 - w.phi1), std::abs(c.phi2 - w.phi2)});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("analytic derivatives match central differences") {
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double y = -1.0 + (kPeriodA + 2.0) * i / 120.0;
    const auto pm = extremal::phi_closed_form(y - h);
    const auto pp = extremal::phi_closed_form(y + h);
    const auto d = extremal::phi_derivatives(y);
    worst = std::max({worst, std::abs((pp.phi0 - pm.phi0) / (2 * h) - d.phi0),
                      std::abs((pp.phi1 - pm.phi1) / (2 * h) - d.phi1),
                      std::abs((pp.phi2 - pm.phi2) / (2 * h) - d.phi2)});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("profile has period a, the expected parities, and the ellipse") {
  auto rng = test_util::make_rng(43);
  for (int i = 0; i < 300; ++i) {
    const double y = test_util::uniform(rng, -2.0 * kPeriodA, 2.0 * kPeriodA);
    const auto p = extremal::phi_closed_form(y);
    const auto q = extremal::phi_closed_form(y + kPeriodA);
    const auto m = extremal::phi_closed_form(-y);
    CHECK(std::abs(q.phi0 - p.phi0) < 1e-9);
    CHECK(std::abs(q.phi1 - p.phi1) < 1e-9);
    CHECK(std::abs(q.phi2 - p.phi2) < 1e-9);
    CHECK(std::abs(m.phi0 - p.phi0) < 1e-10);
    CHECK(std::abs(m.phi1 + p.phi1) < 1e-10);
    CHECK(std::abs(m.phi2 - p.phi2) < 1e-10);
    CHECK(std::abs(2.0 * p.phi1 * p.phi1 + 1.6 * p.phi0 * p.phi0 - 1.0) <
          1e-10);
  }
}

TEST_CASE("each component satisfies its first-order reduction") {
  auto rng = test_util::make_rng(44);
  for (int i = 0; i < 300; ++i) {
    const double y = test_util::uniform(rng, -5.0, 5.0);
    const auto p = extremal::phi_closed_form(y);
    const auto d = extremal::phi_derivatives(y);
    const double f0 = p.phi0 * p.phi0, f1 = p.phi1 * p.phi1,
                 f2 = p.phi2 * p.phi2;
    CHECK(std::abs(d.phi0 * d.phi0 - (1.6 * f0 * f0 - 5.0 * f0 + 2.5)) <
          1e-9);
    CHECK(std::abs(d.phi1 * d.phi1 - (-2.0 * f1 - 2.0 * f1 * f1 + 1.5)) <
          1e-9);
    CHECK(std::abs(d.phi2 * d.phi2 - (7.0 * f2 - 8.0 * f2 * f2 - 1.5)) <
          1e-9);
  }
}

TEST_CASE("the profile sits on the minimizing energy level") {
  auto rng = test_util::make_rng(45);
  for (int i = 0; i < 200; ++i) {
    const double y = test_util::uniform(rng, -5.0, 5.0);
    const auto fi = systems::first_integrals(phi_state(y));
    CHECK(std::abs(fi.e1 + 0.75) < 1e-9);
  }
  // -3/4 is the minimum of the level value (4/3) p^2 (4 p^2 - 3) over the
  // admissible starting amplitudes.
  auto level = [](double p) {
    return (4.0 / 3.0) * p * p * (4.0 * p * p - 3.0);
  };
  CHECK(level(kSqrt38) == doctest::Approx(-0.75).epsilon(1e-15));
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    CHECK(level(p) >= -0.75 - 1e-15);
  }
}

TEST_CASE("conformal factor: pinned values, identity, and range") {
  CHECK(extremal::lambda_f(0.0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(extremal::lambda_f(0.5 * kPeriodA) ==
        doctest::Approx(3.0).epsilon(1e-11));

  auto rng = test_util::make_rng(46);
  double lo = 10.0, hi = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double y = test_util::uniform(rng, -5.0, 5.0);
    const double lf = extremal::lambda_f(y);
    const auto p = extremal::phi_closed_form(y);
    CHECK(std::abs(lf - 2.0 * (p.phi1 * p.phi1 + 4.0 * p.phi2 * p.phi2)) <
          1e-10);
    CHECK(std::abs(lf - (5.0 - 3.2 * p.phi0 * p.phi0)) < 1e-10);
    CHECK(std::abs(extremal::lambda_f(-y) - lf) < 1e-10);
    CHECK(std::abs(extremal::lambda_f(y + kPeriodA) - lf) < 1e-9);
    lo = std::min(lo, lf);
    hi = std::max(hi, lf);
  }
  CHECK(lo >= 3.0 - 1e-12);
  CHECK(hi <= 5.0 + 1e-12);
  CHECK(hi > 4.99);
}

TEST_CASE("metric profile grid accessors and validation") {
  CHECK_THROWS_AS(extremal::metric_profile(14), std::domain_error);
  CHECK_THROWS_AS(extremal::metric_profile(17), std::domain_error);
  CHECK_THROWS_AS(extremal::metric_profile(0), std::domain_error);
  CHECK_THROWS_AS(extremal::metric_profile(-16), std::domain_error);

  const auto prof = extremal::metric_profile(64);
  CHECK(prof.size() == 64);
  CHECK(prof.period() == doctest::Approx(kPeriodA).epsilon(1e-15));
  CHECK(prof.node(0) == 0.0);
  CHECK(prof.node(32) == doctest::Approx(0.5 * kPeriodA).epsilon(1e-15));
  CHECK(static_cast<int>(prof.values().size()) == 64);
  for (int i = 0; i < prof.size(); ++i) {
    CHECK(prof.value(i) == prof.values()[static_cast<std::size_t>(i)]);
    CHECK(prof.value(i) == prof(prof.node(i)));
    CHECK(prof.value(i) >= 3.0 - 1e-12);
    CHECK(prof.value(i) <= 5.0 + 1e-12);
  }
  CHECK(prof.value(0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(prof.value(32) == doctest::Approx(3.0).epsilon(1e-11));
}

TEST_CASE("eigenvalue-area product: three pipelines and pinned digits") {
  const auto b = extremal::lambda_area_pipelines();
  CHECK(std::abs(b.quadrature - b.elliptic_combination) < 1e-10);
  CHECK(std::abs(b.quadrature - b.elliptic_e) < 1e-10);
  CHECK(std::abs(b.elliptic_combination - b.elliptic_e) < 1e-10);

  const double la = extremal::lambda_area();
  CHECK(std::abs(la - kLambdaArea) < 1e-12);
  CHECK(std::abs(la / kPi - 13.364893220555258) < 1e-12);

  // Strictly below both classical comparison levels.
  CHECK(la < 8.0 * kPi * kPi / std::sqrt(3.0));
  CHECK(la < 48.0 * kPi);
}

TEST_CASE("immersion lands on the unit sphere and is doubly periodic") {
  const auto e0 = extremal::embed(0.0, 0.0);
  CHECK(e0.coords[0] == doctest::Approx(kSqrt58).epsilon(1e-13));
  CHECK(std::abs(e0.coords[1]) < 1e-13);
  CHECK(std::abs(e0.coords[2]) < 1e-13);
  CHECK(e0.coords[3] == doctest::Approx(kSqrt38).epsilon(1e-13));
  CHECK(std::abs(e0.coords[4]) < 1e-13);

  auto rng = test_util::make_rng(47);
  for (int i = 0; i < 1000; ++i) {
    const double x = test_util::uniform(rng, -5.0, 5.0);
    const double y = test_util::uniform(rng, -5.0, 5.0);
    const auto e = extremal::embed(x, y);
    double norm2 = 0.0;
    for (double c : e.coords) norm2 += c * c;
    CHECK(std::abs(norm2 - 1.0) < 1e-10);

    // Deck transformation of the quotient: (x, y) -> (x + pi, -y).
    const auto k = extremal::embed(x + kPi, -y);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs(k.coords[j] - e.coords[j]) < 1e-10);
    }
  }
}

TEST_CASE("immersion is conformal with factor lambda_f / 2") {
  auto rng = test_util::make_rng(48);
  for (int i = 0; i < 400; ++i) {
    const double x = test_util::uniform(rng, 0.0, 2.0 * kPi);
    const double y = test_util::uniform(rng, -kPeriodA, kPeriodA);
    const auto dx = extremal::embed_dx(x, y);
    const auto dy = extremal::embed_dy(x, y);
    double gxx = 0.0, gyy = 0.0, gxy = 0.0;
    for (int j = 0; j < 5; ++j) {
      gxx += dx[j] * dx[j];
      gyy += dy[j] * dy[j];
      gxy += dx[j] * dy[j];
    }
    const double half_lf = 0.5 * extremal::lambda_f(y);
    CHECK(std::abs(gxx - half_lf) < 1e-10);
    CHECK(std::abs(gyy - half_lf) < 1e-10);
    CHECK(std::abs(gxy) < 1e-10);
  }
}

TEST_CASE("analytic immersion partials match central differences") {
  const double h = 1e-5;
  auto rng = test_util::make_rng(49);
  for (int i = 0; i < 100; ++i) {
    const double x = test_util::uniform(rng, 0.0, 2.0 * kPi);
    const double y = test_util::uniform(rng, -2.0, 2.0);
    const auto dx = extremal::embed_dx(x, y);
    const auto dy = extremal::embed_dy(x, y);
    const auto exm = extremal::embed(x - h, y), exp_ = extremal::embed(x + h, y);
    const auto eym = extremal::embed(x, y - h), eyp = extremal::embed(x, y + h);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs((exp_.coords[j] - exm.coords[j]) / (2 * h) - dx[j]) <
            1e-8);
      CHECK(std::abs((eyp.coords[j] - eym.coords[j]) / (2 * h) - dy[j]) <
            1e-8);
    }
  }
}

TEST_CASE("eigenfunction residual is at rounding level across the torus") {
  CHECK(extremal::eigen_residual(0.0, 0.3) < 1e-8);

  double worst = 0.0;
  double min_phi2 = 1.0;
  for (int i = 0; i < 48; ++i) {
    for (int j = 0; j < 48; ++j) {
      const double x = 2.0 * kPi * i / 48.0;
      const double y = kPeriodA * j / 48.0;
      worst = std::max(worst, extremal::eigen_residual(x, y));
      min_phi2 = std::min(min_phi2, extremal::phi_closed_form(y).phi2);
    }
  }
  CHECK(worst < 1e-8);
  CHECK(min_phi2 > 0.6);

  auto rng = test_util::make_rng(50);
  for (int i = 0; i < 200; ++i) {
    const double x = test_util::uniform(rng, -5.0, 5.0);
    const double y = test_util::uniform(rng, -5.0, 5.0);
    CHECK(std::abs(extremal::eigen_residual(x + kPi, -y) -
                   extremal::eigen_residual(x, y)) < 1e-12);
  }
}
