#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "kleinx/errors.hpp"

namespace kleinx::odeint {

using State = std::vector<double>;

// Right-hand side: fills dsdy (pre-sized to the state dimension).
using Rhs = std::function<void(double y, const State& s, State& dsdy)>;

struct Options {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double initial_step = 0.0;   // 0 -> automatic selection
  double max_step = 0.0;       // 0 -> whole integration span
  double fixed_step = 0.0;     // > 0 -> uniform steps, no error control
  std::int64_t max_steps = 1'000'000;
};

struct Stats {
  std::int64_t steps_accepted = 0;
  std::int64_t steps_rejected = 0;
  std::int64_t rhs_evals = 0;
};

// Accepted-step mesh plus a quartic interpolant per step.  Immutable after
// construction; safe to share across threads read-only.
class Trajectory {
 public:
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<State>& states() const { return states_; }
  const Options& options() const { return options_; }
  const Stats& stats() const { return stats_; }

  std::size_t size() const { return nodes_.size(); }
  std::size_t dimension() const { return dim_; }
  double y_begin() const { return nodes_.front(); }
  double y_end() const { return nodes_.back(); }
  const State& initial_state() const { return states_.front(); }
  const State& final_state() const { return states_.back(); }

  // Dense evaluation.  At an accepted node this returns the stored state
  // unchanged; in between it evaluates the step's interpolant.
  State eval(double y) const;
  double eval_component(double y, std::size_t component) const;

 private:
  friend Trajectory integrate(const Rhs&, double, const State&, double,
                              const Options&);

  struct DenseStep {
    double y0 = 0.0;
    double h = 0.0;
    std::array<std::vector<double>, 5> rcont;
  };

  std::size_t locate_step(double y) const;

  std::size_t dim_ = 0;
  std::vector<double> nodes_;
  std::vector<State> states_;
  std::vector<DenseStep> steps_;
  Options options_;
  Stats stats_;
};

Trajectory integrate(const Rhs& rhs, double y0, const State& state0,
                     double y_end, const Options& options = {});
Trajectory integrate(const Rhs& rhs, double y0, const State& state0,
                     double y_end, double rel_tol, double abs_tol);

enum class Direction { any, rising, falling };

struct EventSpec {
  std::function<double(double y, const State& s)> fn;
  Direction direction = Direction::any;
  double tol_y = 1e-12;  // bracketing tolerance on y, must be positive
};

struct Event {
  double y = 0.0;
  State state;
};

// Scans the accepted mesh for sign changes of the event function and refines
// each bracket on the dense output.  Events are returned in increasing y.
std::vector<Event> find_events(const Trajectory& traj, const EventSpec& ev);

}  // namespace kleinx::odeint
