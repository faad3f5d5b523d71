#include "diffmdp/mdp.hpp"

#include <cmath>

namespace diffmdp {

SampledMdp assemble_mdp(const DiffusionModel& model, const Grid& grid,
                        const ActionNet& actions, TransitionKernel kernel,
                        double alpha) {
  if (alpha <= 0.0) throw ConfigError("assemble_mdp: alpha must be positive");
  if (kernel.n_nodes() != grid.size() || kernel.n_actions() != actions.size())
    throw ConfigError("assemble_mdp: kernel shape does not match grid/actions");
  if (kernel.grid.size() != grid.size())
    throw ConfigError("assemble_mdp: kernel was estimated on a different grid");
  for (std::size_t i = 0; i < grid.dim(); ++i) {
    if (kernel.grid.counts()[i] != grid.counts()[i] ||
        std::abs(kernel.grid.box().axes[i].lo - grid.box().axes[i].lo) > 1e-12 ||
        std::abs(kernel.grid.box().axes[i].hi - grid.box().axes[i].hi) > 1e-12)
      throw ConfigError("assemble_mdp: kernel grid mismatch on axis " +
                        std::to_string(i));
  }

  SampledMdp mdp;
  mdp.grid = grid;
  mdp.actions = actions;
  mdp.h = kernel.h;
  mdp.alpha = alpha;
  mdp.beta = std::exp(-alpha * kernel.h);
  mdp.kernel = std::move(kernel);

  const std::size_t n = grid.size();
  const std::size_t m = actions.size();
  mdp.stage_cost.resize(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec x = grid.coordinate(i);
    for (std::size_t a = 0; a < m; ++a)
      mdp.stage_cost[i * m + a] = model.running_cost(x, actions.actions[a]) * mdp.h;
  }
  return mdp;
}

}  // namespace diffmdp
