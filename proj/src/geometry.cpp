#include "kleinx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kleinx/extremal.hpp"
#include "kleinx/parallel.hpp"
#include "kleinx/quadrature.hpp"
#include "kleinx/specfun.hpp"

namespace kleinx::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_lawson_pair(int m, int k) {
  if (k < 1 || m < k) {
    throw std::domain_error("Lawson indices must satisfy m >= k >= 1");
  }
}

double ordinate_speed(double v) {
  const double c = std::cos(v);
  return 1.0 / std::sqrt(1.0 + 8.0 * c * c);
}

// Modulus of the Jacobi function attached to the (3,1) ordinate change.
const double kCnModulus = 2.0 * std::sqrt(2.0) / 3.0;

const specfun::WeierstrassP& profile_wp() {
  static const specfun::WeierstrassP wp(
      specfun::WeierstrassInvariants(73.0 / 12.0, -595.0 / 216.0));
  return wp;
}

}  // namespace

SurfaceChart chart_g0() {
  SurfaceChart chart;
  chart.lower = {0.0, 0.0};
  chart.upper = {0.5 * kPi, kPi};
  chart.conformal_factor = [](ChartPoint p) {
    return metric_g0(p.u, p.v).e_coef;
  };
  chart.deck_transform = [](ChartPoint p) {
    return ChartPoint{p.u + 0.5 * kPi, kPi - p.v};
  };
  return chart;
}

SurfaceChart chart_profile() {
  const double half = 0.5 * extremal::period_a();
  SurfaceChart chart;
  chart.lower = {0.0, -half};
  chart.upper = {kPi, half};
  chart.conformal_factor = [](ChartPoint p) {
    return extremal::lambda_f(p.v);
  };
  chart.deck_transform = [](ChartPoint p) {
    return ChartPoint{p.u + kPi, -p.v};
  };
  return chart;
}

MetricCoefficients bipolar_metric(int m, int k, double /*u*/, double v) {
  require_lawson_pair(m, k);
  const double c = std::cos(v);
  const double q = k * k + (m * m - k * k) * c * c;
  const double factor = (q * q + m * m * k * k) / q;
  return {factor, factor / q};
}

MetricCoefficients metric_g0(double /*u*/, double v) {
  const double c = std::cos(v);
  const double t = 1 + 8 * c * c;
  const double factor = (t * t + 9) / t;
  return {factor, factor / t};
}

std::array<double, 4> lawson_immersion(int m, int k, double u, double v) {
  require_lawson_pair(m, k);
  const double cv = std::cos(v);
  const double sv = std::sin(v);
  return {std::cos(m * u) * cv, std::sin(m * u) * cv, std::cos(k * u) * sv,
          std::sin(k * u) * sv};
}

double z_of_v(double v) {
  static const double z_pi =
      quadrature::integrate(ordinate_speed, 0.0, kPi, 1e-12);
  const double turns = std::floor(v / kPi);
  const double r = v - turns * kPi;
  double z = turns * z_pi;
  if (r > 0.0) z += quadrature::integrate(ordinate_speed, 0.0, r, 1e-12);
  return z;
}

double harmonicity_residual(int m, int k, int n) {
  require_lawson_pair(m, k);
  if (n < 8) {
    throw std::domain_error("harmonicity grid needs at least 8 points");
  }
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = kPi * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double v = kPi * j / (n - 1);
      const auto c = lawson_immersion(m, k, u, v);
      const auto up = lawson_immersion(m, k, u + h, v);
      const auto um = lawson_immersion(m, k, u - h, v);
      const auto vp = lawson_immersion(m, k, u, v + h);
      const auto vm = lawson_immersion(m, k, u, v - h);
      double grad_sq = 0.0;
      for (int d = 0; d < 4; ++d) {
        const double du = (up[d] - um[d]) / (2.0 * h);
        const double dv = (vp[d] - vm[d]) / (2.0 * h);
        grad_sq += du * du + dv * dv;
      }
      double norm_sq = 0.0;
      for (int d = 0; d < 4; ++d) {
        const double lap =
            (up[d] - 2.0 * c[d] + um[d] + vp[d] - 2.0 * c[d] + vm[d]) /
            (h * h);
        const double r = lap + grad_sq * c[d];
        norm_sq += r * r;
      }
      worst = std::max(worst, std::sqrt(norm_sq));
    }
  }
  return worst;
}

ScalingReport verify_g0_scaling(int n, int workers) {
  if (n < 32) {
    throw std::domain_error("scaling grid needs at least 32 points per side");
  }
  const extremal::MetricProfile profile(n % 2 == 0 ? n : n + 1);
  const double quarter = specfun::complete_K(0.5) / 2.0;
  const auto& wp = profile_wp();

  std::vector<double> row_metric(n, 0.0);
  std::vector<double> row_identity(n, 0.0);
  parallel::parallel_for(n, workers, [&](int i) {
    const double v = kPi * i / n;
    const double z = z_of_v(v);
    const double y = 2.0 * z + quarter;
    const double lam = profile(y);
    const double jac = 2.0 * ordinate_speed(v);  // dy/dv

    double metric_err = 0.0;
    for (int j = 0; j < n; ++j) {
      const double u = 0.5 * kPi * j / n;
      const auto g = metric_g0(u, v);
      // x = 2u, so the first pullback coefficient is lam * (dx/du)^2.
      const double pulled_e = lam * 4.0;
      const double pulled_g = lam * jac * jac;
      metric_err = std::max(metric_err,
                            std::abs(pulled_e - 2.0 * g.e_coef) / g.e_coef);
      metric_err = std::max(metric_err,
                            std::abs(pulled_g - 2.0 * g.g_coef) / g.g_coef);
    }
    row_metric[i] = metric_err;

    const double cn = specfun::jacobi_cn_sn_dn(3.0 * z, kCnModulus).cn;
    const double t = 1.0 + 8.0 * cn * cn;
    const double lhs = (9.0 + t * t) / t;
    const double ratio = wp.rational(y, 24.0, -38.0, 12.0, -1.0);
    row_identity[i] = std::abs(lhs - (10.0 - ratio * ratio));
  });

  ScalingReport report;
  report.grid = n;
  report.max_rel_error = *std::max_element(row_metric.begin(),
                                           row_metric.end());
  report.max_identity_error = *std::max_element(row_identity.begin(),
                                                row_identity.end());
  return report;
}

double area_g0() {
  double integral = 0.0;
  const int panels = 8;
  for (int i = 0; i < panels; ++i) {
    integral += quadrature::gauss15(
        [](double v) {
          const auto g = metric_g0(0.0, v);
          return std::sqrt(g.e_coef * g.g_coef);
        },
        kPi * i / panels, kPi * (i + 1) / panels);
  }
  return 0.5 * kPi * integral;
}

}  // namespace kleinx::geometry
