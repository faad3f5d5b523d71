#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffmdp/mdp.hpp"
#include "diffmdp/rng.hpp"

namespace diffmdp {

/// Deterministic stationary policy: node index -> action index.
struct Policy {
  std::vector<std::uint32_t> action;

  std::size_t size() const { return action.size(); }
};

enum class SolutionKind { Discounted, Ergodic };

/// Value vector plus solver metadata. Discounted solutions carry no gain;
/// ergodic solutions carry the gain rho_h (cost per unit time) and a bias
/// vector anchored to zero at `anchor`.
struct ValueSolution {
  SolutionKind kind = SolutionKind::Discounted;
  Vec values;
  std::optional<double> gain;
  std::size_t anchor = 0;
  double residual = 0.0;
  std::uint64_t iterations = 0;
};

inline constexpr std::uint64_t kDefaultIterationCap = 1'000'000;

/// One discounted Bellman sweep: out[i] = min_a [c_h(i,a) + beta (P_a V)(i)]
/// with the minimizing action (lowest index on ties) stored in `policy`.
/// Exposed for the contraction/monotonicity property checks.
void bellman_update(const SampledMdp& mdp, ConstView values, MutView out,
                    std::vector<std::uint32_t>* policy = nullptr);

/// Average-cost sweep: out[i] = min_a [c_h(i,a) + (P_a W)(i)], no discount.
void ergodic_update(const SampledMdp& mdp, ConstView values, MutView out,
                    std::vector<std::uint32_t>* policy = nullptr);

/// Discounted value iteration from V = 0. Stops when the sup-norm
/// successive difference drops below tol*(1-beta)/(2*beta), certifying
/// that the result is within tol of the fixed point.
std::pair<ValueSolution, Policy> value_iteration(
    const SampledMdp& mdp, double tol,
    std::uint64_t iteration_cap = kDefaultIterationCap);

/// Iterative evaluation of V = c_h^pi + beta P^pi V with the same
/// certified stopping rule as value_iteration.
Vec policy_evaluation(const SampledMdp& mdp, const Policy& policy, double tol,
                      std::uint64_t iteration_cap = kDefaultIterationCap);

/// Relative value iteration for the average-cost optimality equation:
/// W <- T W - (T W)(anchor), stopping when the span seminorm of successive
/// differences is below tol. Returns gain rho_h = g / h where g is the
/// limiting per-step offset, and the bias with psi(anchor) = 0.
std::pair<ValueSolution, Policy> relative_value_iteration(
    const SampledMdp& mdp, double tol, std::size_t anchor = 0,
    std::uint64_t iteration_cap = kDefaultIterationCap);

struct QLearningOptions {
  std::uint64_t steps = 200'000;
  double learning_rate0 = 0.5;
  double learning_rate_tau = 1'000.0;  // lr_k = lr0 / (1 + k/tau)^power
  double learning_rate_power = 0.75;
  double exploration0 = 1.0;
  double exploration_end = 0.05;
  std::uint64_t exploration_decay_steps = 100'000;
};

struct QLearningResult {
  Vec q;  // row-major n_nodes x n_actions
  Policy policy;
  /// sup-norm Bellman residual of q against the exact kernel.
  double bellman_residual = 0.0;
  std::uint64_t steps = 0;
};

/// Tabular Q-learning driven by sampling next states from the kernel rows
/// (the MDP as a simulator). Single-threaded; reproducible from rng.
QLearningResult q_learning(const SampledMdp& mdp, const QLearningOptions& opts,
                           RandomSource rng);

double span_seminorm(ConstView v);

}  // namespace diffmdp
