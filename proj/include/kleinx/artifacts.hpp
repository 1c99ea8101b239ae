#pragma once

#include <array>
#include <string>
#include <vector>

#include "kleinx/geometry.hpp"
#include "kleinx/odeint.hpp"
#include "kleinx/sturm.hpp"
#include "kleinx/sweep.hpp"
#include "kleinx/verify.hpp"

namespace kleinx::artifacts {

/// 17-significant-digit rendering used by every CSV column, so files
/// round-trip to the exact double.
std::string format_double(double x);

/// Writes content to path, creating parent directories as needed.
/// Throws IoError on any filesystem failure.
void write_text(const std::string& path, const std::string& content);

/// Sweep table, one row per record sorted by p, header
/// p,y_half,cot_alpha,E0,E1,E2,rotation_ok.  Failed records keep their p and
/// carry NaN columns with rotation_ok = 0.
std::string sweep_csv(const std::vector<sweep::SweepRecord>& records);

std::string rule_out_json(const std::vector<sweep::RuleOutRecord>& records);
std::string interval_json(const std::vector<sweep::IntervalRecord>& records);

/// Trajectory of the full system started from the shooting parameter p:
/// integrator tolerances, accepted nodes as plain arrays, and the
/// first-integral drift summary.  No interpolant data is persisted.
std::string trajectory_json(double p, const odeint::Trajectory& traj);

/// Per-channel eigenvalue table (parity and zero count per line).
std::string sturm_channel_json(int k, int n,
                               const std::vector<sturm::SpectralLine>& lines);

/// Three-channel multiplicity report.
std::string sturm_report_json(int n, const sturm::MultiplicityReport& report);

/// Chart-doubling verification report plus the area cross-check.
std::string scaling_json(const geometry::ScalingReport& report);

/// Immersion sampled on an nx-by-ny grid of the fundamental domain,
/// columns x,y,c1..c5.
std::string embed_csv(int nx, int ny);

/// Immersion mesh with the 5-vector orthogonally projected onto the three
/// 1-based coordinate axes requested (default 1,2,4); nx*ny vertices and the
/// interior quad faces.
std::string embed_obj(int nx, int ny, const std::array<int, 3>& axes);

/// Torus immersion mesh in the 3-sphere, projected onto the first three
/// coordinates, with wraparound quad faces.
std::string lawson_obj(int m, int k, int nu, int nv);

/// Metric coefficient table of the (m, k) bipolar metric, columns
/// u,v,E_coef,G_coef.
std::string bipolar_csv(int m, int k, int nu, int nv);

/// Machine-readable acceptance report, one entry per criterion.
std::string verify_json(const std::vector<verify::CriterionResult>& results);

}  // namespace kleinx::artifacts
