#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "kleinx/artifacts.hpp"
#include "kleinx/config.hpp"
#include "kleinx/errors.hpp"
#include "kleinx/extremal.hpp"
#include "kleinx/geometry.hpp"
#include "kleinx/odeint.hpp"
#include "kleinx/specfun.hpp"
#include "kleinx/sturm.hpp"
#include "kleinx/sweep.hpp"
#include "kleinx/systems.hpp"
#include "kleinx/verify.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config_file;
  std::optional<double> rel_tol, abs_tol, event_tol, y_max;
  std::optional<int> sweep_steps, sturm_n, geometry_grid, workers;
  std::optional<std::string> output_dir, format;
};

void add_common_options(CLI::App* cmd, Overrides& o,
                        bool with_format = true) {
  cmd->add_option("--config", o.config_file,
                  "key=value config file (default: $KLEINX_CONFIG)");
  cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
  cmd->add_option("--event-tol", o.event_tol, "event bracketing tolerance");
  cmd->add_option("--sweep-steps", o.sweep_steps, "sweep grid size");
  cmd->add_option("--sturm-n", o.sturm_n, "collocation grid size");
  cmd->add_option("--geometry-grid", o.geometry_grid,
                  "geometry verification grid size");
  cmd->add_option("--y-max", o.y_max, "integration cutoff ordinate");
  cmd->add_option("--output-dir", o.output_dir, "artifact directory");
  if (with_format) {
    cmd->add_option("--format", o.format, "output format: csv or json");
  }
  cmd->add_option("--workers", o.workers, "worker thread count");
}

kleinx::config::RunConfig resolve_config(const Overrides& o) {
  kleinx::config::RunConfig cfg;
  if (o.config_file) {
    cfg = kleinx::config::from_file(*o.config_file);
  } else if (const char* env = std::getenv("KLEINX_CONFIG")) {
    cfg = kleinx::config::from_file(env);
  }
  if (o.rel_tol) cfg.rel_tol = *o.rel_tol;
  if (o.abs_tol) cfg.abs_tol = *o.abs_tol;
  if (o.event_tol) cfg.event_tol = *o.event_tol;
  if (o.sweep_steps) cfg.sweep_steps = *o.sweep_steps;
  if (o.sturm_n) cfg.sturm_n = *o.sturm_n;
  if (o.geometry_grid) cfg.geometry_grid = *o.geometry_grid;
  if (o.y_max) cfg.y_max = *o.y_max;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.format) cfg.format = *o.format;
  if (o.workers) cfg.workers = *o.workers;
  cfg.validate();
  return cfg;
}

std::string artifact_path(const kleinx::config::RunConfig& cfg,
                          const std::optional<std::string>& out,
                          const std::string& fallback) {
  if (out) return *out;
  return cfg.output_dir + "/" + fallback;
}

int cmd_verify(const kleinx::config::RunConfig& cfg, bool as_json) {
  const auto results = kleinx::verify::run_acceptance(cfg);
  if (as_json) {
    std::cout << kleinx::artifacts::verify_json(results);
  } else {
    int passed = 0;
    for (const auto& r : results) {
      std::printf("[%2d/12] %s %s (%.2f s)\n        %s\n", r.index,
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                  r.detail.c_str());
      if (r.passed) ++passed;
    }
    std::printf("%d/12 criteria passed\n", passed);
  }
  if (!kleinx::verify::all_passed(results)) {
    for (const auto& r : results) {
      if (!r.passed) {
        std::fprintf(stderr, "first failing criterion: [%d] %s\n", r.index,
                     r.name.c_str());
        break;
      }
    }
    return 1;
  }
  return 0;
}

int cmd_solve(const kleinx::config::RunConfig& cfg, double p, double y_end,
              const std::optional<std::string>& out) {
  if (!(y_end > 0.0)) {
    throw std::domain_error("--y-end must be positive");
  }
  const auto s0 = kleinx::systems::to_ode_state(
      kleinx::systems::initial_state(p));
  const auto traj = kleinx::odeint::integrate(
      kleinx::systems::ode_rhs_full(), 0.0, s0, y_end, cfg.ode_options());
  const std::string path = artifact_path(cfg, out, "trajectory.json");
  kleinx::artifacts::write_text(path,
                                kleinx::artifacts::trajectory_json(p, traj));
  std::printf("wrote %s (%zu nodes)\n", path.c_str(), traj.size());
  return 0;
}

int cmd_sweep(const kleinx::config::RunConfig& cfg,
              const std::optional<std::string>& out) {
  const auto records =
      kleinx::sweep::run_sweep(kleinx::sweep::default_p_min(),
                               kleinx::sweep::default_p_max(),
                               cfg.sweep_steps, cfg.workers, cfg.y_max);
  const std::string path = artifact_path(cfg, out, "sweep.csv");
  kleinx::artifacts::write_text(path, kleinx::artifacts::sweep_csv(records));
  std::printf("wrote %s (%zu rows)\n", path.c_str(), records.size());
  if (records.size() >= 3) {
    const auto an = kleinx::sweep::analyze(records);
    std::printf(
        "sign changes: %d; slope reversals: %d; refined root: %.10g\n",
        an.sign_changes, an.monotonicity_violations, an.refined_root);
  }
  return 0;
}

int cmd_sturm(const kleinx::config::RunConfig& cfg, std::optional<int> k,
              int count, const std::optional<std::string>& out) {
  const std::string path = artifact_path(cfg, out, "sturm.json");
  if (k) {
    const auto profile = kleinx::extremal::metric_profile(256);
    const auto lines =
        kleinx::sturm::periodic_spectrum(*k, profile, cfg.sturm_n, count);
    kleinx::artifacts::write_text(
        path, kleinx::artifacts::sturm_channel_json(*k, cfg.sturm_n, lines));
    std::printf("wrote %s (%zu lines, channel k=%d)\n", path.c_str(),
                lines.size(), *k);
  } else {
    const auto report = kleinx::sturm::verify_multiplicity(cfg.sturm_n);
    kleinx::artifacts::write_text(
        path, kleinx::artifacts::sturm_report_json(cfg.sturm_n, report));
    std::printf("wrote %s (%s)\n", path.c_str(), report.summary.c_str());
    if (!report.ok) return 1;
  }
  return 0;
}

int cmd_embed(const kleinx::config::RunConfig& cfg, int nx, int ny,
              const std::string& format, const std::vector<int>& axes,
              const std::optional<std::string>& out) {
  if (format == "obj") {
    if (axes.size() != 3) {
      throw std::domain_error("--axes needs exactly three entries");
    }
    const std::array<int, 3> picked = {axes[0], axes[1], axes[2]};
    const std::string path = artifact_path(cfg, out, "embed.obj");
    kleinx::artifacts::write_text(
        path, kleinx::artifacts::embed_obj(nx, ny, picked));
    std::printf("wrote %s (%d vertices)\n", path.c_str(), nx * ny);
  } else if (format == "csv") {
    const std::string path = artifact_path(cfg, out, "embed.csv");
    kleinx::artifacts::write_text(path, kleinx::artifacts::embed_csv(nx, ny));
    std::printf("wrote %s (%d rows)\n", path.c_str(), nx * ny);
  } else {
    throw std::domain_error("embed format must be csv or obj");
  }
  return 0;
}

int cmd_geometry(const kleinx::config::RunConfig& cfg, bool check_identity,
                 const std::vector<int>& lawson,
                 const std::vector<int>& bipolar,
                 const std::optional<std::string>& out) {
  const int modes = (check_identity ? 1 : 0) + (lawson.empty() ? 0 : 1) +
                    (bipolar.empty() ? 0 : 1);
  if (modes != 1) {
    throw std::domain_error(
        "pick exactly one of --check-identity, --lawson, --bipolar");
  }
  if (check_identity) {
    const auto report =
        kleinx::geometry::verify_g0_scaling(cfg.geometry_grid, cfg.workers);
    const std::string path = artifact_path(cfg, out, "scaling.json");
    kleinx::artifacts::write_text(path,
                                  kleinx::artifacts::scaling_json(report));
    std::printf("wrote %s (doubling mismatch %.3g, identity defect %.3g)\n",
                path.c_str(), report.max_rel_error,
                report.max_identity_error);
    return 0;
  }
  if (!lawson.empty()) {
    const std::string path = artifact_path(
        cfg, out,
        "lawson_" + std::to_string(lawson[0]) + "_" +
            std::to_string(lawson[1]) + ".obj");
    kleinx::artifacts::write_text(
        path, kleinx::artifacts::lawson_obj(lawson[0], lawson[1],
                                            cfg.geometry_grid,
                                            cfg.geometry_grid));
    std::printf("wrote %s (%d vertices)\n", path.c_str(),
                cfg.geometry_grid * cfg.geometry_grid);
    return 0;
  }
  const std::string path = artifact_path(
      cfg, out,
      "bipolar_" + std::to_string(bipolar[0]) + "_" +
          std::to_string(bipolar[1]) + ".csv");
  kleinx::artifacts::write_text(
      path, kleinx::artifacts::bipolar_csv(bipolar[0], bipolar[1],
                                           cfg.geometry_grid,
                                           cfg.geometry_grid));
  std::printf("wrote %s (%d rows)\n", path.c_str(),
              cfg.geometry_grid * cfg.geometry_grid);
  return 0;
}

int cmd_rule_out(const kleinx::config::RunConfig& cfg,
                 const std::vector<double>& ps,
                 const std::optional<std::string>& out) {
  std::vector<kleinx::sweep::RuleOutRecord> records;
  records.reserve(ps.size());
  for (const double p : ps) {
    records.push_back(kleinx::sweep::rule_out_upper(p, cfg.y_max));
  }
  const std::string path = artifact_path(cfg, out, "rule_out.json");
  kleinx::artifacts::write_text(path,
                                kleinx::artifacts::rule_out_json(records));
  for (const auto& r : records) {
    std::printf("p=%.6g: E1=%.6g E2=%.6g amplitude zero at y=%.6g%s\n", r.p,
                r.e1, r.e2, r.phi2_first_zero,
                r.falsified ? " [FALSIFIED]" : "");
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_interval_check(const kleinx::config::RunConfig& cfg,
                       const std::vector<double>& ps,
                       const std::optional<std::string>& out) {
  std::vector<kleinx::sweep::IntervalRecord> records;
  records.reserve(ps.size());
  for (const double p : ps) {
    records.push_back(kleinx::sweep::interval_checks(p, cfg.y_max));
  }
  const std::string path = artifact_path(cfg, out, "interval_check.json");
  kleinx::artifacts::write_text(path,
                                kleinx::artifacts::interval_json(records));
  for (const auto& r : records) {
    std::printf("p=%.6g: min|phi2|=%.6g min|W|=%.6g %s\n", r.p, r.min_phi2,
                r.min_wronskian, r.ok ? "ok" : "[FAILED]");
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_specfun_selftest() {
  int failures = 0;
  const auto report = [&failures](const char* name, double value,
                                  double bound) {
    const bool ok = value < bound;
    if (!ok) ++failures;
    std::printf("%s %s: %.3g (bound %.1g)\n", ok ? "ok  " : "FAIL", name,
                value, bound);
  };

  double legendre = 0.0;
  for (const double k : {0.1, 0.25, 0.5, 0.8, 0.95}) {
    const double kc = std::sqrt((1.0 - k) * (1.0 + k));
    legendre = std::max(
        legendre,
        std::abs(kleinx::specfun::complete_E(k) *
                     kleinx::specfun::complete_K(kc) +
                 kleinx::specfun::complete_E(kc) *
                     kleinx::specfun::complete_K(k) -
                 kleinx::specfun::complete_K(k) *
                     kleinx::specfun::complete_K(kc) -
                 std::numbers::pi / 2.0));
  }
  report("Legendre relation", legendre, 1e-12);

  double jacobi = 0.0;
  for (const double k : {0.2, 0.6, 2.0 * std::sqrt(2.0) / 3.0}) {
    for (const double u : {0.3, 1.4, 3.3}) {
      const auto j = kleinx::specfun::jacobi_cn_sn_dn(u, k);
      jacobi = std::max(jacobi, std::abs(j.cn * j.cn + j.sn * j.sn - 1.0));
      jacobi =
          std::max(jacobi, std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0));
    }
  }
  report("Jacobi identities", jacobi, 1e-12);

  double wp_residual = 0.0;
  const double g2s[3] = {73.0 / 12.0, -8.0 / 3.0, 193.0 / 12.0};
  const double g3s[3] = {-595.0 / 216.0, 28.0 / 27.0, 2681.0 / 216.0};
  for (int i = 0; i < 3; ++i) {
    const kleinx::specfun::WeierstrassP wp(
        kleinx::specfun::WeierstrassInvariants(g2s[i], g3s[i]));
    for (int j = 1; j <= 8; ++j) {
      const double y = wp.real_half_period() * j / 8.0;
      if (y < wp.pole_guard() * 2.0) continue;
      const auto v = wp.eval(y);
      const double defect = std::abs(
          v.dp * v.dp - (4.0 * v.p * v.p * v.p - g2s[i] * v.p - g3s[i]));
      wp_residual =
          std::max(wp_residual, defect / (1.0 + std::abs(v.p * v.p * v.p)));
    }
  }
  report("P differential equation", wp_residual, 1e-9);

  const double km = 2.0 * std::sqrt(2.0) / 3.0;
  report("period bridge",
         std::abs(2.0 * kleinx::specfun::complete_K(0.5) -
                  (4.0 / 3.0) * kleinx::specfun::complete_K(km)),
         1e-12);
  report("second-kind bridge",
         std::abs(6.0 * kleinx::specfun::complete_E(km) -
                  (8.0 * kleinx::specfun::complete_E(0.5) -
                   3.0 * kleinx::specfun::complete_K(0.5))),
         1e-12);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for an extremal Klein-bottle metric"};
  app.require_subcommand(1);

  Overrides common;

  auto* verify_cmd = app.add_subcommand(
      "verify", "run the twelve-point verification battery");
  bool verify_json_flag = false;
  verify_cmd->add_flag("--json", verify_json_flag,
                       "emit a machine-readable report");
  add_common_options(verify_cmd, common);

  auto* solve_cmd =
      app.add_subcommand("solve", "integrate the full system from p");
  double solve_p = 0.0;
  double solve_y_end = 0.0;
  std::optional<std::string> solve_out;
  solve_cmd->add_option("--p", solve_p, "shooting parameter in (0, 1)")
      ->required();
  solve_cmd->add_option("--y-end", solve_y_end, "integration endpoint")
      ->required();
  solve_cmd->add_option("--out", solve_out, "output file path");
  add_common_options(solve_cmd, common);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "intersection-slope sweep over p");
  std::optional<int> sweep_steps_flag;
  std::optional<std::string> sweep_out;
  sweep_cmd->add_option("--steps", sweep_steps_flag, "grid point count");
  sweep_cmd->add_option("--out", sweep_out, "output file path");
  add_common_options(sweep_cmd, common);

  auto* sturm_cmd =
      app.add_subcommand("sturm", "periodic spectrum of the profile metric");
  std::optional<int> sturm_k;
  int sturm_count = 8;
  std::optional<std::string> sturm_out;
  sturm_cmd->add_option("--k", sturm_k, "angular channel (0, 1 or 2)");
  sturm_cmd->add_option("--count", sturm_count, "eigenvalues per channel");
  sturm_cmd->add_option("--out", sturm_out, "output file path");
  add_common_options(sturm_cmd, common);

  auto* embed_cmd =
      app.add_subcommand("embed", "sample the unit-sphere immersion");
  int embed_nx = 64;
  int embed_ny = 64;
  std::string embed_format = "csv";
  std::vector<int> embed_axes = {1, 2, 4};
  std::optional<std::string> embed_out;
  embed_cmd->add_option("--nx", embed_nx, "grid points in x");
  embed_cmd->add_option("--ny", embed_ny, "grid points in y");
  embed_cmd->add_option("--format", embed_format, "csv or obj")
      ->check(CLI::IsMember({"csv", "obj"}));
  embed_cmd->add_option("--axes", embed_axes,
                        "three 1-based coordinates for the OBJ projection")
      ->delimiter(',');
  embed_cmd->add_option("--out", embed_out, "output file path");
  add_common_options(embed_cmd, common, /*with_format=*/false);

  auto* geometry_cmd =
      app.add_subcommand("geometry", "chart metrics and scaling checks");
  bool check_identity = false;
  std::vector<int> lawson_pair;
  std::vector<int> bipolar_pair;
  std::optional<std::string> geometry_out;
  geometry_cmd->add_flag("--check-identity", check_identity,
                         "verify the chart doubling identity");
  geometry_cmd->add_option("--lawson", lawson_pair,
                           "torus indices m k for an OBJ mesh")
      ->expected(2);
  geometry_cmd->add_option("--bipolar", bipolar_pair,
                           "indices m k for a metric table CSV")
      ->expected(2);
  geometry_cmd->add_option("--out", geometry_out, "output file path");
  add_common_options(geometry_cmd, common);

  auto* rule_out_cmd = app.add_subcommand(
      "rule-out", "upper-window exclusion evidence per parameter");
  std::vector<double> rule_out_ps = {0.87, 0.90, 0.95, 0.99};
  std::optional<std::string> rule_out_out;
  rule_out_cmd->add_option("--p", rule_out_ps,
                           "parameters in (sqrt(3)/2, 1)");
  rule_out_cmd->add_option("--out", rule_out_out, "output file path");
  add_common_options(rule_out_cmd, common);

  auto* interval_cmd = app.add_subcommand(
      "interval-check", "lower-window amplitude and rotation bounds");
  std::vector<double> interval_ps = {0.1, 0.3, 0.5, 0.7, 0.8};
  std::optional<std::string> interval_out;
  interval_cmd->add_option("--p", interval_ps,
                           "parameters in (0, sqrt(3)/2)");
  interval_cmd->add_option("--out", interval_out, "output file path");
  add_common_options(interval_cmd, common);

  auto* selftest_cmd =
      app.add_subcommand("specfun-selftest", "special-function identities");
  selftest_cmd->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(selftest_cmd)) return cmd_specfun_selftest();
    if (sweep_steps_flag) common.sweep_steps = sweep_steps_flag;
    const auto cfg = resolve_config(common);
    if (app.got_subcommand(verify_cmd)) {
      return cmd_verify(cfg, verify_json_flag);
    }
    if (app.got_subcommand(solve_cmd)) {
      return cmd_solve(cfg, solve_p, solve_y_end, solve_out);
    }
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(cfg, sweep_out);
    if (app.got_subcommand(sturm_cmd)) {
      return cmd_sturm(cfg, sturm_k, sturm_count, sturm_out);
    }
    if (app.got_subcommand(embed_cmd)) {
      return cmd_embed(cfg, embed_nx, embed_ny, embed_format, embed_axes,
                       embed_out);
    }
    if (app.got_subcommand(geometry_cmd)) {
      return cmd_geometry(cfg, check_identity, lawson_pair, bipolar_pair,
                          geometry_out);
    }
    if (app.got_subcommand(rule_out_cmd)) {
      return cmd_rule_out(cfg, rule_out_ps, rule_out_out);
    }
    if (app.got_subcommand(interval_cmd)) {
      return cmd_interval_check(cfg, interval_ps, interval_out);
    }
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const kleinx::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const kleinx::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
