#pragma once

#include <array>
#include <functional>

namespace kleinx::geometry {

/// Diagonal metric block ds^2 = e_coef du^2 + g_coef dv^2.
struct MetricCoefficients {
  double e_coef;
  double g_coef;
};

struct ChartPoint {
  double u;
  double v;
};

/// A conformal chart together with its fundamental domain and the deck
/// transform realizing the Klein-bottle identification on the double cover.
/// The conformal factor is strictly positive and invariant under the deck
/// transform.
struct SurfaceChart {
  ChartPoint lower;
  ChartPoint upper;
  std::function<double(ChartPoint)> conformal_factor;
  std::function<ChartPoint(ChartPoint)> deck_transform;
};

/// Chart of the explicit (3, 1) bipolar metric: u in [0, pi/2), v in
/// [0, pi); the deck transform is the glide reflection (u + pi/2, pi - v).
SurfaceChart chart_g0();

/// Chart of the eigenvalue-normalized profile metric: x in [0, pi), y in
/// [-a/2, a/2) with a the profile period; the deck transform is
/// (x + pi, -y).
SurfaceChart chart_profile();

/// Metric induced on the bipolar surface of the (m, k) doubly periodic
/// minimal torus in the 3-sphere.  Requires m >= k >= 1.  With
/// q(v) = k^2 + (m^2 - k^2) cos^2 v the coefficients are
/// (q^2 + m^2 k^2)/q and the same factor divided once more by q.
MetricCoefficients bipolar_metric(int m, int k, double u, double v);

/// The (3, 1) bipolar metric written out: factor (9 + t^2)/t with
/// t = 1 + 8 cos^2 v, on du^2 + dv^2/t.
MetricCoefficients metric_g0(double u, double v);

/// Doubly periodic minimal immersion of the (m, k) torus into the unit
/// 3-sphere: (cos mu cos v, sin mu cos v, cos ku sin v, sin ku sin v).
/// Requires m >= k >= 1.
std::array<double, 4> lawson_immersion(int m, int k, double u, double v);

/// Ordinate change z(v) = integral_0^v dt / sqrt(1 + 8 cos^2 t), extended
/// to all real v through the pi-periodicity of the integrand.  Adaptive
/// quadrature, relative tolerance 1e-12.  Satisfies
/// cos v = cn(3 z(v), 2 sqrt(2)/3).
double z_of_v(double v);

/// Max |mu_uu + mu_vv + |grad mu|^2 mu| of the immersion over an n x n
/// parameter grid, by central differences (n >= 8).  This tension-field
/// proxy uses the flat chart Laplacian, so it vanishes only when the chart
/// is conformal (m == k); for other pairs it is an exploratory report, not
/// a pass/fail quantity.
double harmonicity_residual(int m, int k, int n);

struct ScalingReport {
  int grid = 0;
  /// Worst relative mismatch, over both diagonal coefficients, between the
  /// profile metric pulled back through (u, v) -> (2u, 2 z(v) + K(1/2)/2)
  /// and twice the chart metric.
  double max_rel_error = 0.0;
  /// Worst absolute defect of the closed elliptic-function identity for the
  /// conformal factor (Jacobi route vs Weierstrass route) on the same grid.
  double max_identity_error = 0.0;
};

/// Grid verification that the eigenvalue-normalized profile metric is twice
/// the chart metric.  The pullback includes the Jacobian dy/dv = 2/sqrt(t)
/// of the ordinate change; the comparison runs on an n x n grid (n >= 32)
/// and parallelizes over rows.
ScalingReport verify_g0_scaling(int n, int workers = 1);

/// Area of the chart metric over the fundamental domain
/// u in [0, pi/2), v in [0, pi).
double area_g0();

}  // namespace kleinx::geometry
