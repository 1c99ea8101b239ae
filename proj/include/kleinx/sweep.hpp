#pragma once

#include <string>
#include <vector>

#include "kleinx/odeint.hpp"

namespace kleinx::sweep {

struct Crossing {
  double y_half = 0.0;
  odeint::State state;  // {phi0, phi1, dphi0, dphi1} at the crossing
};

// First positive root of phi1 along the reduced (0,1) flow started from the
// shooting data at p.  The event ordinate is resolved to better than 1e-10;
// throws NumericalError if no crossing occurs before y_max.
Crossing half_period_crossing(double p, double y_max = 50.0);

// phi0'/phi1' at the half-period crossing.  Vanishes exactly when the
// trajectory meets the phi0-axis at a right angle.
double cot_alpha(double p, double y_max = 50.0);

struct SweepRecord {
  double p = 0.0;
  double y_half = 0.0;
  double cot_alpha = 0.0;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;  // reconstructed at the crossing
  bool rotation_ok = false;
  bool phi2_positive = false;
  bool wronskian_nonzero = false;
  std::string error;  // nonempty if the point failed; values then unset
};

// One shooting record.  Numerical failures are captured in `error`; an
// out-of-range p still raises std::domain_error.
SweepRecord sweep_point(double p, double y_max = 50.0);

// Inclusive uniform grid over [p_min, p_max], fanned out over `workers`
// threads.  Output order is by ascending p and independent of the worker
// count.
std::vector<SweepRecord> run_sweep(double p_min, double p_max, int steps,
                                   int workers = 1, double y_max = 50.0);

// Endpoints of the canonical 999-point grid.
double default_p_min();
double default_p_max();
std::vector<SweepRecord> default_sweep(int workers = 1);

struct SweepAnalysis {
  int sign_changes = 0;           // of cot_alpha along the grid
  double bracket_lo = 0.0;        // grid bracket of the first sign change
  double bracket_hi = 0.0;
  double refined_root = 0.0;      // bisection of cot_alpha in the bracket
  int monotonicity_violations = 0;  // sign flips of the discrete slope
};

// Qualitative summary of a sweep; records with errors are skipped.
SweepAnalysis analyze(const std::vector<SweepRecord>& records);

// Evidence that shooting data above the rotation window cannot produce an
// orbit with phi2 of one sign: the starting first integrals have the
// blocking signs and phi2 is observed to change sign.
struct RuleOutRecord {
  double p = 0.0;
  double e1 = 0.0, e2 = 0.0;  // closed-form values at y = 0
  bool e_signs_ok = false;    // e1 > 0 and e2 < 0
  bool phi2_sign_change = false;
  double phi2_first_zero = 0.0;
  int theta_stationary_count = 0;   // chart-A theta' = 0 events encountered
  double max_e_mismatch = 0.0;      // chart reconstruction vs closed form
  double closure_distance = 0.0;    // min return distance to the start
  bool falsified = false;  // no phi2 zero AND the orbit closes
};

RuleOutRecord rule_out_upper(double p, double y_max = 50.0);

// Structure of the rotation window: over [0, 2 y_half] the third amplitude
// stays inside (0, 1), the (0,1)-Wronskian stays away from zero, and the
// planar angle advances with one sign.
struct IntervalRecord {
  double p = 0.0;
  double y_window = 0.0;  // 2 * y_half
  double min_phi2 = 0.0, max_phi2 = 0.0;
  double min_wronskian = 0.0;
  bool phi2_positive = false;
  bool phi2_below_one = false;
  bool wronskian_nonzero = false;
  bool rotation_single_signed = false;
  bool ok = false;
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;  // closed-form values
};

IntervalRecord interval_checks(double p, double y_max = 50.0);

}  // namespace kleinx::sweep
