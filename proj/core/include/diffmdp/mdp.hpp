#pragma once

#include "diffmdp/kernel.hpp"
#include "diffmdp/model.hpp"

namespace diffmdp {

/// Finite sampled-time MDP: grid states, net actions, estimated h-step
/// kernel, stage cost c_h(i, a) = c(x_i, a) * h and per-step discount
/// beta = exp(-alpha * h).
struct SampledMdp {
  Grid grid;
  ActionNet actions;
  TransitionKernel kernel;
  /// Row-major n_nodes x n_actions.
  Vec stage_cost;
  double h = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  std::size_t n_nodes() const { return kernel.n_nodes(); }
  std::size_t n_actions() const { return kernel.n_actions(); }

  double cost(std::size_t node, std::size_t action) const {
    return stage_cost[node * n_actions() + action];
  }
};

/// Binds a model to an estimated kernel. alpha > 0 is required; for
/// average-cost use the stored beta is simply ignored by the solver.
SampledMdp assemble_mdp(const DiffusionModel& model, const Grid& grid,
                        const ActionNet& actions, TransitionKernel kernel,
                        double alpha);

}  // namespace diffmdp
