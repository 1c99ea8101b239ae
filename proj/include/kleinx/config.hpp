#pragma once

#include <string>

#include "kleinx/odeint.hpp"

namespace kleinx::config {

/// Run-wide settings shared by every subcommand.  Defaults reproduce the
/// pinned verification setup; files and flags override individual keys.
struct RunConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double event_tol = 1e-12;
  int sweep_steps = 999;
  int sturm_n = 256;
  int geometry_grid = 64;
  double y_max = 50.0;
  std::string output_dir = ".";
  std::string format = "csv";  // csv | json
  int workers = 4;

  bool operator==(const RunConfig&) const = default;

  /// Throws std::domain_error when any invariant fails: tolerances must be
  /// positive, counts at least 1, format one of csv/json.
  void validate() const;

  /// Integrator options with the configured tolerances filled in.
  odeint::Options ode_options() const;

  /// key=value serialization, one key per line, round-trip exact.
  std::string print() const;
};

/// Parses key=value lines (blank lines and '#' comments ignored) on top of
/// the defaults.  Unknown keys or malformed values throw std::domain_error.
RunConfig parse(const std::string& text);

/// Reads and parses a config file.  Throws IoError when unreadable.
RunConfig from_file(const std::string& path);

}  // namespace kleinx::config
