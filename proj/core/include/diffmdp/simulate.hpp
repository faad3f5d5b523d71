#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "diffmdp/model.hpp"
#include "diffmdp/rng.hpp"
#include "diffmdp/types.hpp"

namespace diffmdp {

/// One simulated trajectory: |states| = |times|, |actions| = |times| - 1,
/// actions aligned with the left endpoint of each step. Steps are uniform
/// except for a possibly shorter final step.
struct Path {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> actions;
};

/// Action sequence held constant on [k*period, (k+1)*period).
struct PiecewiseConstantControl {
  std::vector<Vec> actions;
  double period = 0.0;
};

/// Feedback map evaluated at every integration step.
struct FeedbackControl {
  std::function<Vec(ConstView)> map;
};

/// Feedback map evaluated only at sampling instants k*period and held
/// constant in between (the piecewise-constant realization of a policy).
struct SampledFeedbackControl {
  std::function<Vec(ConstView)> map;
  double period = 0.0;
};

using ControlSpec =
    std::variant<PiecewiseConstantControl, FeedbackControl, SampledFeedbackControl>;

/// Euler-Maruyama realization of the controlled SDE:
///   X_{k+1} = X_k + b(X_k, a_k) dt + sigma(X_k) sqrt(dt) Z_k.
/// For period-based controls, dt must divide the period. Throws
/// SimulationDiverged if a state goes non-finite.
Path simulate_path(const DiffusionModel& model, const ControlSpec& control,
                   ConstView x0, double horizon, double dt, RandomSource rng);

/// Visitor invoked at the left endpoint of each Euler step.
using StepVisitor =
    std::function<void(std::size_t k, double t, ConstView x, ConstView a, double step_dt)>;

/// Streaming variant of simulate_path: visits every step without storing
/// the trajectory. Returns the final state via `final_state` if non-null.
void simulate_steps(const DiffusionModel& model, const ControlSpec& control,
                    ConstView x0, double horizon, double dt, RandomSource rng,
                    const StepVisitor& visit, Vec* final_state = nullptr);

/// Piecewise-constant interpolation of a chain: X(t) = states[floor(t/h)],
/// right continuous with left limits.
class StepFunction {
public:
  StepFunction(std::vector<Vec> states, double h);

  /// Throws ConfigError for t < 0 or t beyond the last index.
  const Vec& operator()(double t) const;

  std::size_t index_of(double t) const;
  double step() const { return h_; }
  std::size_t size() const { return states_.size(); }

private:
  std::vector<Vec> states_;
  double h_;
};

inline StepFunction interpolate_chain(std::vector<Vec> states, double h) {
  return StepFunction(std::move(states), h);
}

}  // namespace diffmdp
