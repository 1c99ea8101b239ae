#pragma once

#include <string>
#include <vector>

#include "kleinx/config.hpp"

namespace kleinx::verify {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;   // measured values against their targets
  double seconds = 0.0;
};

/// Runs the twelve-point verification battery.  Tolerances and reference
/// values are pinned inside each criterion; the config contributes only the
/// worker count for the parallel stages.  Results always come back in
/// criterion order, failures included.
std::vector<CriterionResult> run_acceptance(const config::RunConfig& cfg);

/// True iff every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace kleinx::verify
