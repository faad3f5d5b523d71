#include "diffmdp/simulate.hpp"

#include <cmath>

namespace diffmdp {

namespace {

bool divides(double small, double big) {
  const double q = big / small;
  return std::abs(q - std::round(q)) < 1e-9;
}

bool all_finite(ConstView x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

void simulate_steps(const DiffusionModel& model, const ControlSpec& control,
                    ConstView x0, double horizon, double dt, RandomSource rng,
                    const StepVisitor& visit, Vec* final_state) {
  if (dt <= 0.0) throw ConfigError("simulate: dt must be positive");
  if (horizon < 0.0) throw ConfigError("simulate: negative horizon");
  if (static_cast<int>(x0.size()) != model.dim)
    throw ConfigError("simulate: x0 dimension mismatch");

  const PiecewiseConstantControl* pc = std::get_if<PiecewiseConstantControl>(&control);
  const FeedbackControl* fb = std::get_if<FeedbackControl>(&control);
  const SampledFeedbackControl* sfb = std::get_if<SampledFeedbackControl>(&control);
  if (pc && !divides(dt, pc->period))
    throw ConfigError("simulate: dt must divide the control period");
  if (sfb && !divides(dt, sfb->period))
    throw ConfigError("simulate: dt must divide the control period");

  const std::size_t full_steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  const double remainder = horizon - static_cast<double>(full_steps) * dt;
  const bool partial = remainder > 1e-12 * std::max(1.0, horizon);
  const std::size_t steps = full_steps + (partial ? 1 : 0);

  const int d = model.dim;
  GaussianStream noise(rng);
  Vec x(x0.begin(), x0.end());
  Vec b(d), sig(static_cast<std::size_t>(d) * d), z(d);
  Vec action;
  std::size_t held_block = static_cast<std::size_t>(-1);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double step_dt = (partial && k == steps - 1) ? remainder : dt;

    if (pc) {
      const std::size_t block = static_cast<std::size_t>(std::floor(t / pc->period + 1e-9));
      if (block >= pc->actions.size())
        throw ConfigError("simulate: action sequence shorter than horizon");
      action = pc->actions[block];
    } else if (fb) {
      action = fb->map(x);
    } else {
      const std::size_t block = static_cast<std::size_t>(std::floor(t / sfb->period + 1e-9));
      if (block != held_block) {
        action = sfb->map(x);
        held_block = block;
      }
    }

    if (visit) visit(k, t, x, action, step_dt);

    model.drift(x, action, b);
    model.sigma(x, sig);
    noise.fill(z);
    const double sqdt = std::sqrt(step_dt);
    for (int i = 0; i < d; ++i) {
      double diffusion = 0.0;
      for (int j = 0; j < d; ++j) diffusion += sig[i * d + j] * z[j];
      x[i] += b[i] * step_dt + diffusion * sqdt;
    }
    if (!all_finite(x))
      throw SimulationDiverged("simulate: state became non-finite", k);
  }
  if (final_state) *final_state = std::move(x);
}

Path simulate_path(const DiffusionModel& model, const ControlSpec& control,
                   ConstView x0, double horizon, double dt, RandomSource rng) {
  Path path;
  path.times.push_back(0.0);
  path.states.emplace_back(x0.begin(), x0.end());
  Vec last;
  // The visitor sees the left endpoint of each step, so intermediate
  // states arrive one step late and the final state comes from the
  // simulator directly.
  simulate_steps(model, control, x0, horizon, dt, rng,
                 [&](std::size_t k, double t, ConstView x, ConstView a, double step_dt) {
                   if (k > 0) path.states.emplace_back(x.begin(), x.end());
                   path.actions.emplace_back(a.begin(), a.end());
                   path.times.push_back(t + step_dt);
                 },
                 &last);
  if (!path.actions.empty()) path.states.push_back(std::move(last));
  return path;
}

StepFunction::StepFunction(std::vector<Vec> states, double h)
    : states_(std::move(states)), h_(h) {
  if (h_ <= 0.0) throw ConfigError("interpolate_chain: h must be positive");
  if (states_.empty()) throw ConfigError("interpolate_chain: empty state sequence");
}

std::size_t StepFunction::index_of(double t) const {
  if (t < 0.0) throw ConfigError("step function evaluated at negative time");
  const std::size_t k = static_cast<std::size_t>(std::floor(t / h_));
  if (k >= states_.size())
    throw ConfigError("step function evaluated beyond the last index");
  return k;
}

const Vec& StepFunction::operator()(double t) const { return states_[index_of(t)]; }

}  // namespace diffmdp
