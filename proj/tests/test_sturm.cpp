#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kleinx/errors.hpp"
#include "kleinx/extremal.hpp"
#include "kleinx/sturm.hpp"

using namespace kleinx;
using sturm::Parity;
using sturm::SpectralLine;

namespace {

const extremal::MetricProfile& weight() {
  static const extremal::MetricProfile w = extremal::metric_profile(256);
  return w;
}

struct LineRef {
  double eigenvalue;
  Parity parity;
  int zeros;
  double tol;
};

// Reference spectra on the 256-point grid, frozen from a converged run and
// cross-checked against the 2x grid (internal validation bound 1e-6).
const std::vector<LineRef> kRef0 = {
    {0.0, Parity::even, 0, 1e-8},
    {0.776801917586, Parity::odd, 2, 1e-8},
    {1.0, Parity::even, 2, 1e-8},
    {3.501873498175, Parity::odd, 4, 1e-8},
    {3.582835097936, Parity::even, 4, 1e-8},
};
const std::vector<LineRef> kRef1 = {
    {0.251691011413, Parity::even, 0, 1e-8},
    {1.0, Parity::odd, 2, 1e-8},
    {1.287004010629, Parity::even, 2, 1e-8},
    {3.752526879497, Parity::odd, 4, 1e-8},
    {3.847933133519, Parity::even, 4, 1e-8},
};
const std::vector<LineRef> kRef2 = {
    {1.0, Parity::even, 0, 1e-8},
    {1.668388359010, Parity::odd, 2, 1e-8},
    {2.145463419168, Parity::even, 2, 1e-8},
    {4.503359618241, Parity::odd, 4, 1e-8},
    {4.648643211459, Parity::even, 4, 1e-8},
};

void check_channel(int k, const std::vector<LineRef>& ref) {
  const auto lines = sturm::periodic_spectrum(k, weight(), 256, 5);
  REQUIRE(lines.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CAPTURE(k);
    CAPTURE(i);
    CHECK(std::abs(lines[i].eigenvalue - ref[i].eigenvalue) < ref[i].tol);
    CHECK(lines[i].parity == ref[i].parity);
    CHECK(lines[i].zero_count == ref[i].zeros);
    CHECK(lines[i].k_index == k);
    CHECK(lines[i].eigenfunction.size() == 256);
  }
}

}  // namespace

TEST_CASE("channel spectra match the reference table") {
  check_channel(0, kRef0);
  check_channel(1, kRef1);
  check_channel(2, kRef2);
}

TEST_CASE("the weight produces eigenvalue 1 in all three channels at once") {
  const auto c0 = sturm::periodic_spectrum(0, weight(), 256, 3);
  const auto c1 = sturm::periodic_spectrum(1, weight(), 256, 2);
  const auto c2 = sturm::periodic_spectrum(2, weight(), 256, 1);
  CHECK(std::abs(c0[2].eigenvalue - 1.0) < 1e-8);
  CHECK(std::abs(c1[1].eigenvalue - 1.0) < 1e-8);
  CHECK(std::abs(c2[0].eigenvalue - 1.0) < 1e-8);
  CHECK(c2[0].zero_count == 0);  // positive ground line
  CHECK(c1[1].zero_count == 2);
  CHECK(c0[2].zero_count == 2);
}

TEST_CASE("auxiliary eigenvalues against their reference approximations") {
  const auto c0 = sturm::periodic_spectrum(0, weight(), 256, 2);
  const auto c1 = sturm::periodic_spectrum(1, weight(), 256, 3);
  CHECK(std::abs(c1[0].eigenvalue - 0.2517) < 2e-2);
  CHECK(std::abs(c0[1].eigenvalue - 0.7768) < 2e-2);
  // The third k=1 line converges to 1.28700, not the rounded reference
  // value 1.31 used by the acceptance contract; the gap of ~0.023 is pinned
  // here and reported as a discrepancy by the acceptance suite.
  CHECK(std::abs(c1[2].eigenvalue - 1.2870040106) < 1e-8);
  CHECK(std::abs(c1[2].eigenvalue - 1.31) > 2e-2);
  CHECK(std::abs(c1[2].eigenvalue - 1.31) < 3e-2);
}

TEST_CASE("zero counts follow the oscillation pattern 0,2,2,4,4") {
  const std::vector<int> pattern = {0, 2, 2, 4, 4};
  for (int k = 0; k <= 2; ++k) {
    const auto lines = sturm::periodic_spectrum(k, weight(), 256, 5);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      CHECK(lines[i].zero_count == pattern[i]);
      CHECK(lines[i].zero_count == sturm::count_eigenfunction_zeros(lines[i]));
    }
    // Ascending eigenvalue order comes with the solver.
    for (std::size_t i = 1; i < lines.size(); ++i) {
      CHECK(lines[i].eigenvalue >= lines[i - 1].eigenvalue);
    }
  }
}

TEST_CASE("Rayleigh quotient reproduces each eigenvalue") {
  for (int k = 0; k <= 2; ++k) {
    const auto lines = sturm::periodic_spectrum(k, weight(), 256, 5);
    for (const auto& line : lines) {
      const double q = sturm::rayleigh_quotient(k, weight(), line.eigenfunction);
      CHECK(std::abs(q - line.eigenvalue) < 1e-8);
    }
  }
}

TEST_CASE("eigenvalues and parities are stable under grid refinement") {
  for (int k = 0; k <= 2; ++k) {
    const auto a = sturm::periodic_spectrum(k, weight(), 64, 5);
    const auto b = sturm::periodic_spectrum(k, weight(), 128, 5);
    const auto c = sturm::periodic_spectrum(k, weight(), 256, 5);
    for (std::size_t i = 0; i < 5; ++i) {
      // The weight is analytic, so the collocation eigenvalues sit at the
      // rounding floor already on the coarsest admissible grid; both
      // doubling shifts land far below the 1e-6 convergence bound.
      CHECK(std::abs(a[i].eigenvalue - b[i].eigenvalue) < 1e-10);
      CHECK(std::abs(b[i].eigenvalue - c[i].eigenvalue) < 1e-10);
      CHECK(a[i].parity == c[i].parity);
      CHECK(b[i].parity == c[i].parity);
      CHECK(a[i].zero_count == c[i].zero_count);
    }
  }
}

TEST_CASE("the constant mode sits at eigenvalue zero") {
  const auto ground = sturm::periodic_spectrum(0, weight(), 256, 1);
  CHECK(std::abs(ground[0].eigenvalue) < 1e-9);
  const auto [mn, mx] = std::minmax_element(ground[0].eigenfunction.begin(),
                                            ground[0].eigenfunction.end());
  CHECK(std::abs(*mx - *mn) < 1e-9);
  CHECK(std::abs(*mx - 1.0) < 1e-9);  // max-norm scaling
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(sturm::periodic_spectrum(3, weight(), 256, 5),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::periodic_spectrum(-1, weight(), 256, 5),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::periodic_spectrum(0, weight(), 32, 5),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::periodic_spectrum(0, weight(), 129, 5),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::periodic_spectrum(0, weight(), 256, 0),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::periodic_spectrum(0, weight(), 256, 100),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::rayleigh_quotient(0, weight(),
                                           std::vector<double>(63, 1.0)),
                  std::domain_error);
  CHECK_THROWS_AS(sturm::rayleigh_quotient(5, weight(),
                                           std::vector<double>(128, 1.0)),
                  std::domain_error);
}

TEST_CASE("zero counting on synthetic sample vectors") {
  SpectralLine line;
  line.eigenfunction.assign(40, 1.0);
  CHECK_THROWS_AS(sturm::count_eigenfunction_zeros(line), std::domain_error);

  const int n = 128;
  line.eigenfunction.assign(n, 0.0);
  CHECK_THROWS_AS(sturm::count_eigenfunction_zeros(line), NumericalError);

  // A pure wave with exact zeros on the grid still counts two crossings.
  for (int j = 0; j < n; ++j) {
    line.eigenfunction[static_cast<std::size_t>(j)] =
        std::sin(2.0 * std::numbers::pi * j / n);
  }
  CHECK(sturm::count_eigenfunction_zeros(line) == 2);

  for (int j = 0; j < n; ++j) {
    line.eigenfunction[static_cast<std::size_t>(j)] =
        std::cos(4.0 * std::numbers::pi * j / n);
  }
  CHECK(sturm::count_eigenfunction_zeros(line) == 4);

  // No sign change at all.
  for (int j = 0; j < n; ++j) {
    line.eigenfunction[static_cast<std::size_t>(j)] =
        2.0 + std::sin(2.0 * std::numbers::pi * j / n);
  }
  CHECK(sturm::count_eigenfunction_zeros(line) == 0);

  // A run of two sub-threshold samples cannot be classified.
  line.eigenfunction.assign(n, 1.0);
  line.eigenfunction[10] = 0.0;
  line.eigenfunction[11] = 0.0;
  CHECK_THROWS_AS(sturm::count_eigenfunction_zeros(line), NumericalError);

  // A single grazing sample between same-sign flanks is a touch, not a
  // crossing.
  line.eigenfunction.assign(n, 1.0);
  line.eigenfunction[10] = 1e-12;
  CHECK(sturm::count_eigenfunction_zeros(line) == 0);
}

TEST_CASE("multiplicity assembly finds a five-dimensional eigenspace") {
  const auto report = sturm::verify_multiplicity(256);
  CHECK(report.ok);
  CHECK(std::abs(report.lambda1 - 1.0) < 1e-8);
  CHECK(report.multiplicity == 5);
  CHECK(report.violations.empty());
  CHECK(!report.summary.empty());

  REQUIRE(report.contributions.size() == 3);
  int total = 0;
  for (const auto& c : report.contributions) {
    CHECK(std::abs(c.eigenvalue - 1.0) < 1e-8);
    CHECK(c.multiplicity == (c.k_index == 0 ? 1 : 2));
    total += c.multiplicity;
  }
  CHECK(total == 5);

  // The two sub-unit torus eigenvalues are rejected on parity grounds.
  REQUIRE(report.excluded.size() == 2);
  bool saw_k0 = false, saw_k1 = false;
  for (const auto& line : report.excluded) {
    if (line.k_index == 0) {
      saw_k0 = true;
      CHECK(line.parity == Parity::odd);
      CHECK(std::abs(line.eigenvalue - 0.7768) < 2e-2);
    }
    if (line.k_index == 1) {
      saw_k1 = true;
      CHECK(line.parity == Parity::even);
      CHECK(std::abs(line.eigenvalue - 0.2517) < 2e-2);
    }
  }
  CHECK(saw_k0);
  CHECK(saw_k1);
  CHECK(report.lines.size() == 15);
}

TEST_CASE("multiplicity verdict is grid-independent") {
  const auto coarse = sturm::verify_multiplicity(128);
  CHECK(coarse.ok);
  CHECK(coarse.multiplicity == 5);
  CHECK(std::abs(coarse.lambda1 - 1.0) < 1e-8);
}
