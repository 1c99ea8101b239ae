#include "kleinx/odeint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kleinx/rootfind.hpp"

namespace kleinx::odeint {
namespace {

// Dormand–Prince 5(4) tableau with the first-same-as-last property.
constexpr double c2 = 1.0 / 5.0;
constexpr double c3 = 3.0 / 10.0;
constexpr double c4 = 4.0 / 5.0;
constexpr double c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Coefficients of the quartic dense-output polynomial.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// PI step-size controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kMinScale = 0.2;
constexpr double kMaxScale = 10.0;

class CheckedRhs {
 public:
  CheckedRhs(const Rhs& rhs, std::size_t dim, Stats* stats)
      : rhs_(rhs), dim_(dim), stats_(stats) {}

  void operator()(double y, const State& s, State& dsdy) const {
    dsdy.resize(dim_);
    rhs_(y, s, dsdy);
    if (dsdy.size() != dim_) {
      throw std::invalid_argument(
          "rhs produced a derivative of dimension " +
          std::to_string(dsdy.size()) + " for a state of dimension " +
          std::to_string(dim_));
    }
    ++stats_->rhs_evals;
  }

 private:
  const Rhs& rhs_;
  std::size_t dim_;
  Stats* stats_;
};

double initial_step_guess(const CheckedRhs& f, double y0, const State& s0,
                          const State& f0, double rel_tol,
                          double abs_tol, double h_max) {
  const std::size_t n = s0.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = abs_tol + rel_tol * std::abs(s0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (s0[i] / sk) * (s0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, h_max);

  State s1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) s1[i] = s0[i] + h * f0[i];
  f(y0 + h, s1, f1);

  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = abs_tol + rel_tol * std::abs(s0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;

  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, h_max});
}

}  // namespace

std::size_t Trajectory::locate_step(double y) const {
  // Index of the dense step containing y; assumes y within range.
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
  std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
  if (idx > 0) --idx;
  return std::min(idx, steps_.size() - 1);
}

State Trajectory::eval(double y) const {
  if (nodes_.empty()) throw std::domain_error("empty trajectory");
  if (y < nodes_.front() || y > nodes_.back()) {
    throw std::domain_error("dense evaluation outside the integrated span");
  }
  // Exact hits on accepted nodes reproduce the stored state unchanged.
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), y);
  if (it != nodes_.end() && *it == y) {
    return states_[static_cast<std::size_t>(it - nodes_.begin())];
  }
  const std::size_t k = locate_step(y);
  const DenseStep& st = steps_[k];
  const double theta = (y - st.y0) / st.h;
  const double theta1 = 1.0 - theta;
  State out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = st.rcont[0][i] +
             theta * (st.rcont[1][i] +
                      theta1 * (st.rcont[2][i] +
                                theta * (st.rcont[3][i] +
                                         theta1 * st.rcont[4][i])));
  }
  return out;
}

double Trajectory::eval_component(double y, std::size_t component) const {
  if (component >= dim_) throw std::domain_error("component out of range");
  return eval(y)[component];
}

Trajectory integrate(const Rhs& rhs, double y0, const State& state0,
                     double y_end, const Options& options) {
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0)) {
    throw std::domain_error("tolerances must be positive");
  }
  if (!(y_end > y0)) {
    throw std::domain_error("integration requires y_end > y0");
  }
  if (state0.empty()) throw std::domain_error("empty initial state");

  const std::size_t n = state0.size();
  const double span = y_end - y0;
  const double h_max =
      options.max_step > 0.0 ? std::min(options.max_step, span) : span;

  Trajectory traj;
  traj.dim_ = n;
  traj.options_ = options;
  CheckedRhs f(rhs, n, &traj.stats_);

  double y = y0;
  State s = state0;
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), s_new(n);
  f(y, s, k1);

  traj.nodes_.push_back(y);
  traj.states_.push_back(s);

  double h;
  std::int64_t fixed_count = 0;
  if (options.fixed_step > 0.0) {
    fixed_count = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(span / options.fixed_step)));
    h = span / static_cast<double>(fixed_count);
  } else if (options.initial_step > 0.0) {
    h = std::min(options.initial_step, h_max);
  } else {
    h = initial_step_guess(f, y, s, k1, options.rel_tol,
                           options.abs_tol, h_max);
  }

  double fac_old = 1e-4;
  bool previous_rejected = false;
  bool last = false;
  std::int64_t iterations = 0;

  while (!last) {
    if (++iterations > options.max_steps) {
      throw NumericalError("step limit exceeded at y = " + std::to_string(y));
    }
    if (std::abs(h) < 1e-14 * std::abs(y) || y + h == y) {
      throw NumericalError("step size underflow at y = " + std::to_string(y));
    }
    if (options.fixed_step > 0.0) {
      last = traj.stats_.steps_accepted + 1 >= fixed_count;
      if (last) h = y_end - y;
    } else if (y + 1.01 * h - y_end > 0.0) {
      h = y_end - y;
      last = true;
    }

    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + h * a21 * k1[i];
    f(y + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = s[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(y + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = s[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(y + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = s[i] +
               h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(y + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = s[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    f(y + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      s_new[i] = s[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    f(y + h, s_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = options.abs_tol +
                        options.rel_tol *
                            std::max(std::abs(s[i]), std::abs(s_new[i]));
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));

    const bool accept = options.fixed_step > 0.0 || err <= 1.0;
    if (accept) {
      Trajectory::DenseStep st;
      st.y0 = y;
      st.h = h;
      for (auto& r : st.rcont) r.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = s_new[i] - s[i];
        const double bspl = h * k1[i] - ydiff;
        st.rcont[0][i] = s[i];
        st.rcont[1][i] = ydiff;
        st.rcont[2][i] = bspl;
        st.rcont[3][i] = ydiff - h * k7[i] - bspl;
        st.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                              d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      traj.steps_.push_back(std::move(st));

      y += h;
      s.swap(s_new);
      k1.swap(k7);  // first-same-as-last
      traj.nodes_.push_back(y);
      traj.states_.push_back(s);
      ++traj.stats_.steps_accepted;

      if (options.fixed_step <= 0.0) {
        const double fac11 = std::pow(std::max(err, 1e-20), kExpo1);
        double fac = fac11 / std::pow(fac_old, kBeta);
        fac = std::max(1.0 / kMaxScale, std::min(1.0 / kMinScale, fac / kSafety));
        double h_new = h / fac;
        if (previous_rejected) h_new = std::min(h_new, h);
        h = std::min(h_new, h_max);
        fac_old = std::max(err, 1e-4);
      }
      previous_rejected = false;
    } else {
      const double fac11 = std::pow(err, kExpo1);
      h = h / std::min(1.0 / kMinScale, fac11 / kSafety);
      previous_rejected = true;
      last = false;
      ++traj.stats_.steps_rejected;
    }
  }
  // Land on the requested endpoint exactly.
  traj.nodes_.back() = y_end;
  return traj;
}

Trajectory integrate(const Rhs& rhs, double y0, const State& state0,
                     double y_end, double rel_tol, double abs_tol) {
  Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  return integrate(rhs, y0, state0, y_end, opt);
}

std::vector<Event> find_events(const Trajectory& traj, const EventSpec& ev) {
  if (!ev.fn) throw std::domain_error("event function not set");
  if (!(ev.tol_y > 0.0)) {
    throw std::domain_error("event refinement tolerance must be positive");
  }
  if (traj.size() == 0) throw std::domain_error("empty trajectory");

  const auto& nodes = traj.nodes();
  const auto& states = traj.states();

  // Scan grid: every accepted node plus a fixed subdivision of each step, so
  // crossings inside long steps (possible for very smooth solutions) are not
  // missed between nodes.
  constexpr int kSubdiv = 16;
  std::vector<double> ys;
  std::vector<double> g;
  ys.reserve((nodes.size() - 1) * kSubdiv + 1);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    ys.push_back(nodes[k]);
    g.push_back(ev.fn(nodes[k], states[k]));
    const double h = nodes[k + 1] - nodes[k];
    for (int j = 1; j < kSubdiv; ++j) {
      const double y = nodes[k] + h * j / kSubdiv;
      if (y <= ys.back() || y >= nodes[k + 1]) continue;
      ys.push_back(y);
      g.push_back(ev.fn(y, traj.eval(y)));
    }
  }
  ys.push_back(nodes.back());
  g.push_back(ev.fn(nodes.back(), states.back()));

  auto passes = [&ev](int sign_before, int sign_after) {
    switch (ev.direction) {
      case Direction::rising:
        return sign_before < sign_after;
      case Direction::falling:
        return sign_before > sign_after;
      case Direction::any:
        return true;
    }
    return true;
  };

  std::vector<Event> out;
  auto push = [&out, &ev](double y, State state) {
    if (!out.empty() && std::abs(out.back().y - y) <= ev.tol_y) return;
    out.push_back(Event{y, std::move(state)});
  };

  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (g[k] == 0.0) {
      // A grid point landing exactly on a root; direction from neighbours.
      int before = 0, after = 0;
      if (k > 0) before = (g[k - 1] > 0.0) - (g[k - 1] < 0.0);
      if (k + 1 < ys.size()) after = (g[k + 1] > 0.0) - (g[k + 1] < 0.0);
      if (ev.direction == Direction::any || passes(before, after)) {
        push(ys[k], traj.eval(ys[k]));
      }
      continue;
    }
    if (k + 1 >= ys.size() || g[k + 1] == 0.0) continue;
    if ((g[k] > 0.0) == (g[k + 1] > 0.0)) continue;

    const int sa = g[k] > 0.0 ? 1 : -1;
    if (!passes(sa, -sa)) continue;
    auto fdense = [&traj, &ev](double y) { return ev.fn(y, traj.eval(y)); };
    const double root = rootfind::bracketed_root(fdense, ys[k], ys[k + 1],
                                                 g[k], g[k + 1], ev.tol_y);
    push(root, traj.eval(root));
  }
  return out;
}

}  // namespace kleinx::odeint
