#include "kleinx/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kleinx/errors.hpp"

namespace kleinx::config {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::domain_error("config: bad value for " + key + ": " + value);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::domain_error("config: bad value for " + key + ": " + value);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(event_tol > 0.0)) {
    throw std::domain_error("config: tolerances must be positive");
  }
  if (sweep_steps < 1) throw std::domain_error("config: sweep_steps >= 1");
  if (sturm_n < 1) throw std::domain_error("config: sturm_n >= 1");
  if (geometry_grid < 1) {
    throw std::domain_error("config: geometry_grid >= 1");
  }
  if (workers < 1) throw std::domain_error("config: workers >= 1");
  if (!(y_max > 0.0)) throw std::domain_error("config: y_max must be positive");
  if (format != "csv" && format != "json") {
    throw std::domain_error("config: format must be csv or json");
  }
}

odeint::Options RunConfig::ode_options() const {
  odeint::Options opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = abs_tol;
  return opts;
}

std::string RunConfig::print() const {
  std::ostringstream out;
  out << "rel_tol=" << format_double(rel_tol) << '\n'
      << "abs_tol=" << format_double(abs_tol) << '\n'
      << "event_tol=" << format_double(event_tol) << '\n'
      << "sweep_steps=" << sweep_steps << '\n'
      << "sturm_n=" << sturm_n << '\n'
      << "geometry_grid=" << geometry_grid << '\n'
      << "y_max=" << format_double(y_max) << '\n'
      << "output_dir=" << output_dir << '\n'
      << "format=" << format << '\n'
      << "workers=" << workers << '\n';
  return out.str();
}

RunConfig parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string trimmed = strip(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("config: expected key=value, got: " + trimmed);
    }
    const std::string key = strip(trimmed.substr(0, eq));
    const std::string value = strip(trimmed.substr(eq + 1));
    if (key == "rel_tol") {
      cfg.rel_tol = parse_double(key, value);
    } else if (key == "abs_tol") {
      cfg.abs_tol = parse_double(key, value);
    } else if (key == "event_tol") {
      cfg.event_tol = parse_double(key, value);
    } else if (key == "sweep_steps") {
      cfg.sweep_steps = parse_int(key, value);
    } else if (key == "sturm_n") {
      cfg.sturm_n = parse_int(key, value);
    } else if (key == "geometry_grid") {
      cfg.geometry_grid = parse_int(key, value);
    } else if (key == "y_max") {
      cfg.y_max = parse_double(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "workers") {
      cfg.workers = parse_int(key, value);
    } else {
      throw std::domain_error("config: unknown key: " + key);
    }
  }
  return cfg;
}

RunConfig from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace kleinx::config
