#include "kleinx/artifacts.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kleinx/errors.hpp"
#include "kleinx/extremal.hpp"
#include "kleinx/systems.hpp"

namespace kleinx::artifacts {

namespace {

using json = nlohmann::ordered_json;

json line_entry(const sturm::SpectralLine& line) {
  return json{{"k", line.k_index},
              {"eigenvalue", line.eigenvalue},
              {"parity", sturm::to_string(line.parity)},
              {"zeros", line.zero_count}};
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " +
                    target.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(target);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string sweep_csv(const std::vector<sweep::SweepRecord>& records) {
  std::string out = "p,y_half,cot_alpha,E0,E1,E2,rotation_ok\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rec : records) {
    const bool good = rec.error.empty();
    out += format_double(rec.p);
    out += ',';
    out += format_double(good ? rec.y_half : nan);
    out += ',';
    out += format_double(good ? rec.cot_alpha : nan);
    out += ',';
    out += format_double(good ? rec.e0 : nan);
    out += ',';
    out += format_double(good ? rec.e1 : nan);
    out += ',';
    out += format_double(good ? rec.e2 : nan);
    out += ',';
    out += (good && rec.rotation_ok) ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string rule_out_json(const std::vector<sweep::RuleOutRecord>& records) {
  json entries = json::array();
  for (const auto& r : records) {
    entries.push_back(json{{"p", r.p},
                           {"e1", r.e1},
                           {"e2", r.e2},
                           {"e_signs_ok", r.e_signs_ok},
                           {"phi2_sign_change", r.phi2_sign_change},
                           {"phi2_first_zero", r.phi2_first_zero},
                           {"theta_stationary_count", r.theta_stationary_count},
                           {"max_e_mismatch", r.max_e_mismatch},
                           {"closure_distance", r.closure_distance},
                           {"falsified", r.falsified}});
  }
  return json{{"records", entries}}.dump(2) + "\n";
}

std::string interval_json(const std::vector<sweep::IntervalRecord>& records) {
  json entries = json::array();
  for (const auto& r : records) {
    entries.push_back(json{{"p", r.p},
                           {"y_window", r.y_window},
                           {"min_phi2", r.min_phi2},
                           {"max_phi2", r.max_phi2},
                           {"min_wronskian", r.min_wronskian},
                           {"phi2_positive", r.phi2_positive},
                           {"phi2_below_one", r.phi2_below_one},
                           {"wronskian_nonzero", r.wronskian_nonzero},
                           {"rotation_single_signed", r.rotation_single_signed},
                           {"e0", r.e0},
                           {"e1", r.e1},
                           {"e2", r.e2},
                           {"ok", r.ok}});
  }
  return json{{"records", entries}}.dump(2) + "\n";
}

std::string trajectory_json(double p, const odeint::Trajectory& traj) {
  const auto initial =
      systems::first_integrals(systems::from_ode_state(
          traj.y_begin(), traj.initial_state()));
  double drift[6] = {0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto fi = systems::first_integrals(
        systems::from_ode_state(traj.nodes()[i], traj.states()[i]));
    drift[0] = std::max(drift[0], std::abs(fi.e0 - initial.e0));
    drift[1] = std::max(drift[1], std::abs(fi.e1 - initial.e1));
    drift[2] = std::max(drift[2], std::abs(fi.e2 - initial.e2));
    drift[3] = std::max(drift[3], std::abs(fi.kappa0 - initial.kappa0));
    drift[4] = std::max(drift[4], std::abs(fi.kappa1 - initial.kappa1));
    drift[5] = std::max(drift[5], std::abs(fi.kappa2 - initial.kappa2));
  }
  const double max_drift =
      std::max({drift[0], drift[1], drift[2], drift[3], drift[4], drift[5]});

  json states = json::array();
  for (const auto& s : traj.states()) states.push_back(s);

  json doc{{"p", p},
           {"y_begin", traj.y_begin()},
           {"y_end", traj.y_end()},
           {"tolerances",
            {{"rel", traj.options().rel_tol},
             {"abs", traj.options().abs_tol}}},
           {"initial_integrals",
            {{"e0", initial.e0},
             {"e1", initial.e1},
             {"e2", initial.e2},
             {"kappa0", initial.kappa0},
             {"kappa1", initial.kappa1},
             {"kappa2", initial.kappa2}}},
           {"drift",
            {{"e0", drift[0]},
             {"e1", drift[1]},
             {"e2", drift[2]},
             {"kappa0", drift[3]},
             {"kappa1", drift[4]},
             {"kappa2", drift[5]},
             {"max", max_drift}}},
           {"nodes", {{"y", traj.nodes()}, {"states", states}}}};
  return doc.dump(2) + "\n";
}

std::string sturm_channel_json(int k, int n,
                               const std::vector<sturm::SpectralLine>& lines) {
  json table = json::array();
  for (const auto& line : lines) table.push_back(line_entry(line));
  return json{{"k", k}, {"n", n}, {"lines", table}}.dump(2) + "\n";
}

std::string sturm_report_json(int n, const sturm::MultiplicityReport& report) {
  json contributions = json::array();
  for (const auto& c : report.contributions) {
    contributions.push_back(json{{"k", c.k_index},
                                 {"eigenvalue", c.eigenvalue},
                                 {"multiplicity", c.multiplicity}});
  }
  json lines = json::array();
  for (const auto& line : report.lines) lines.push_back(line_entry(line));
  json excluded = json::array();
  for (const auto& line : report.excluded) excluded.push_back(line_entry(line));
  return json{{"n", n},
              {"ok", report.ok},
              {"lambda1", report.lambda1},
              {"multiplicity", report.multiplicity},
              {"summary", report.summary},
              {"contributions", contributions},
              {"lines", lines},
              {"excluded", excluded},
              {"violations", report.violations}}
             .dump(2) +
         "\n";
}

std::string scaling_json(const geometry::ScalingReport& report) {
  const double area = geometry::area_g0();
  return json{{"grid", report.grid},
              {"max_rel_error", report.max_rel_error},
              {"max_identity_error", report.max_identity_error},
              {"area", area},
              {"doubled_area", 2.0 * area},
              {"eigenvalue_area_product", extremal::lambda_area()}}
             .dump(2) +
         "\n";
}

namespace {

void check_embed_grid(int nx, int ny) {
  if (nx < 2 || ny < 2) {
    throw std::domain_error("immersion grid needs nx, ny >= 2");
  }
}

}  // namespace

std::string embed_csv(int nx, int ny) {
  check_embed_grid(nx, ny);
  const double a = extremal::period_a();
  std::string out = "x,y,c1,c2,c3,c4,c5\n";
  for (int i = 0; i < nx; ++i) {
    const double x = std::numbers::pi * i / nx;
    for (int j = 0; j < ny; ++j) {
      const double y = -0.5 * a + a * j / ny;
      const auto point = extremal::embed(x, y);
      out += format_double(x);
      out += ',';
      out += format_double(y);
      for (const double c : point.coords) {
        out += ',';
        out += format_double(c);
      }
      out += '\n';
    }
  }
  return out;
}

std::string embed_obj(int nx, int ny, const std::array<int, 3>& axes) {
  check_embed_grid(nx, ny);
  for (const int axis : axes) {
    if (axis < 1 || axis > 5) {
      throw std::domain_error("projection axes must be in 1..5");
    }
  }
  if (axes[0] == axes[1] || axes[0] == axes[2] || axes[1] == axes[2]) {
    throw std::domain_error("projection axes must be distinct");
  }
  const double a = extremal::period_a();
  std::string out;
  for (int i = 0; i < nx; ++i) {
    const double x = std::numbers::pi * i / nx;
    for (int j = 0; j < ny; ++j) {
      const double y = -0.5 * a + a * j / ny;
      const auto point = extremal::embed(x, y);
      out += "v " + format_double(point.coords[axes[0] - 1]) + ' ' +
             format_double(point.coords[axes[1] - 1]) + ' ' +
             format_double(point.coords[axes[2] - 1]) + '\n';
    }
  }
  // Interior quads only: the fundamental-domain boundary is glued by the
  // Klein identification, which a rectangular index wrap would misrepresent.
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const int base = i * ny + j + 1;  // OBJ indexing is 1-based
      out += "f " + std::to_string(base) + ' ' +
             std::to_string(base + ny) + ' ' +
             std::to_string(base + ny + 1) + ' ' +
             std::to_string(base + 1) + '\n';
    }
  }
  return out;
}

std::string lawson_obj(int m, int k, int nu, int nv) {
  if (nu < 3 || nv < 3) {
    throw std::domain_error("torus mesh needs nu, nv >= 3");
  }
  std::string out;
  for (int i = 0; i < nu; ++i) {
    const double u = 2.0 * std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2.0 * std::numbers::pi * j / nv;
      const auto p = geometry::lawson_immersion(m, k, u, v);
      out += "v " + format_double(p[0]) + ' ' + format_double(p[1]) + ' ' +
             format_double(p[2]) + '\n';
    }
  }
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const int i1 = (i + 1) % nu;
      const int j1 = (j + 1) % nv;
      out += "f " + std::to_string(i * nv + j + 1) + ' ' +
             std::to_string(i1 * nv + j + 1) + ' ' +
             std::to_string(i1 * nv + j1 + 1) + ' ' +
             std::to_string(i * nv + j1 + 1) + '\n';
    }
  }
  return out;
}

std::string bipolar_csv(int m, int k, int nu, int nv) {
  if (nu < 2 || nv < 2) {
    throw std::domain_error("metric table needs nu, nv >= 2");
  }
  std::string out = "u,v,E_coef,G_coef\n";
  for (int i = 0; i < nu; ++i) {
    const double u = std::numbers::pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = std::numbers::pi * j / nv;
      const auto g = geometry::bipolar_metric(m, k, u, v);
      out += format_double(u);
      out += ',';
      out += format_double(v);
      out += ',';
      out += format_double(g.e_coef);
      out += ',';
      out += format_double(g.g_coef);
      out += '\n';
    }
  }
  return out;
}

std::string verify_json(const std::vector<verify::CriterionResult>& results) {
  json entries = json::array();
  for (const auto& r : results) {
    entries.push_back(json{{"index", r.index},
                           {"name", r.name},
                           {"passed", r.passed},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
  }
  return entries.dump(2) + "\n";
}

}  // namespace kleinx::artifacts
