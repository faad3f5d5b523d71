#include "diffmdp/solvers.hpp"

#include <cmath>
#include <limits>

namespace diffmdp {

namespace {

double sup_diff(ConstView a, ConstView b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void sweep(const SampledMdp& mdp, ConstView values, double discount, MutView out,
           std::vector<std::uint32_t>* policy) {
  const std::size_t n = mdp.n_nodes();
  const std::size_t m = mdp.n_actions();
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_a = 0;
    for (std::size_t a = 0; a < m; ++a) {
      double ev = 0.0;
      for (const auto& e : mdp.kernel.rows[a][i]) ev += e.p * values[e.col];
      const double q = mdp.cost(i, a) + discount * ev;
      if (q < best) {  // strict: ties keep the lowest action index
        best = q;
        best_a = static_cast<std::uint32_t>(a);
      }
    }
    out[i] = best;
    if (policy) (*policy)[i] = best_a;
  }
}

}  // namespace

double span_seminorm(ConstView v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

void bellman_update(const SampledMdp& mdp, ConstView values, MutView out,
                    std::vector<std::uint32_t>* policy) {
  sweep(mdp, values, mdp.beta, out, policy);
}

void ergodic_update(const SampledMdp& mdp, ConstView values, MutView out,
                    std::vector<std::uint32_t>* policy) {
  sweep(mdp, values, 1.0, out, policy);
}

std::pair<ValueSolution, Policy> value_iteration(const SampledMdp& mdp, double tol,
                                                 std::uint64_t iteration_cap) {
  if (!(mdp.beta > 0.0 && mdp.beta < 1.0))
    throw NumericalError("value iteration: discount beta must lie in (0, 1)");
  if (tol <= 0.0) throw ConfigError("value iteration: tol must be positive");

  const std::size_t n = mdp.n_nodes();
  const double threshold = tol * (1.0 - mdp.beta) / (2.0 * mdp.beta);
  Vec v(n, 0.0), next(n, 0.0);
  Policy policy;
  policy.action.assign(n, 0);

  ValueSolution sol;
  sol.kind = SolutionKind::Discounted;
  for (std::uint64_t k = 0; k < iteration_cap; ++k) {
    bellman_update(mdp, v, next, &policy.action);
    const double diff = sup_diff(next, v);
    v.swap(next);
    ++sol.iterations;
    if (diff <= threshold) {
      sol.values = std::move(v);
      sol.residual = diff;
      return {std::move(sol), std::move(policy)};
    }
    sol.residual = diff;
  }
  throw NumericalError("value iteration: cap of " + std::to_string(iteration_cap) +
                       " iterations exceeded (residual " +
                       std::to_string(sol.residual) + ")");
}

Vec policy_evaluation(const SampledMdp& mdp, const Policy& policy, double tol,
                      std::uint64_t iteration_cap) {
  if (!(mdp.beta > 0.0 && mdp.beta < 1.0))
    throw NumericalError("policy evaluation: discount beta must lie in (0, 1)");
  if (tol <= 0.0) throw ConfigError("policy evaluation: tol must be positive");
  if (policy.size() != mdp.n_nodes())
    throw ConfigError("policy evaluation: policy length mismatch");

  const std::size_t n = mdp.n_nodes();
  const double threshold = tol * (1.0 - mdp.beta) / (2.0 * mdp.beta);
  Vec v(n, 0.0), next(n, 0.0);
  double diff = 0.0;
  for (std::uint64_t k = 0; k < iteration_cap; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = policy.action[i];
      double ev = 0.0;
      for (const auto& e : mdp.kernel.rows[a][i]) ev += e.p * v[e.col];
      next[i] = mdp.cost(i, a) + mdp.beta * ev;
    }
    diff = sup_diff(next, v);
    v.swap(next);
    if (diff <= threshold) return v;
  }
  throw NumericalError("policy evaluation: iteration cap exceeded (residual " +
                       std::to_string(diff) + ")");
}

std::pair<ValueSolution, Policy> relative_value_iteration(
    const SampledMdp& mdp, double tol, std::size_t anchor,
    std::uint64_t iteration_cap) {
  if (tol <= 0.0) throw ConfigError("relative value iteration: tol must be positive");
  if (anchor >= mdp.n_nodes())
    throw ConfigError("relative value iteration: anchor out of range");

  const std::size_t n = mdp.n_nodes();
  Vec w(n, 0.0), tw(n, 0.0), delta(n, 0.0);
  Policy policy;
  policy.action.assign(n, 0);

  ValueSolution sol;
  sol.kind = SolutionKind::Ergodic;
  sol.anchor = anchor;
  for (std::uint64_t k = 0; k < iteration_cap; ++k) {
    ergodic_update(mdp, w, tw, &policy.action);
    for (std::size_t i = 0; i < n; ++i) delta[i] = tw[i] - w[i];
    const double span = span_seminorm(delta);
    const double offset = tw[anchor];
    for (std::size_t i = 0; i < n; ++i) w[i] = tw[i] - offset;
    ++sol.iterations;
    sol.residual = span;
    if (span <= tol) {
      // At convergence T W - W is (near) constant; its mid-span value is
      // the per-step gain, accurate to span/2.
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (double d : delta) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      const double per_step_gain = 0.5 * (lo + hi);
      sol.gain = per_step_gain / mdp.h;  // cost per unit time
      sol.values = std::move(w);
      sol.values[anchor] = 0.0;
      return {std::move(sol), std::move(policy)};
    }
  }
  throw NumericalError(
      "relative value iteration: span did not contract below tolerance after " +
      std::to_string(iteration_cap) +
      " iterations (residual " + std::to_string(sol.residual) +
      "); the closed-loop chain may be reducible (over-truncated grid?)");
}

QLearningResult q_learning(const SampledMdp& mdp, const QLearningOptions& opts,
                           RandomSource rng) {
  const std::size_t n = mdp.n_nodes();
  const std::size_t m = mdp.n_actions();
  QLearningResult result;
  result.q.assign(n * m, 0.0);
  Philox4x32 gen(rng);

  auto greedy = [&](std::size_t i) {
    std::size_t best_a = 0;
    double best = result.q[i * m];
    for (std::size_t a = 1; a < m; ++a)
      if (result.q[i * m + a] < best) {
        best = result.q[i * m + a];
        best_a = a;
      }
    return best_a;
  };
  auto sample_next = [&](std::size_t i, std::size_t a) {
    const double u = gen.next_uniform();
    double acc = 0.0;
    const auto& row = mdp.kernel.rows[a][i];
    for (const auto& e : row) {
      acc += e.p;
      if (u <= acc) return static_cast<std::size_t>(e.col);
    }
    return static_cast<std::size_t>(row.back().col);
  };

  std::size_t state = n / 2;
  for (std::uint64_t k = 0; k < opts.steps; ++k) {
    const double frac =
        std::min(1.0, static_cast<double>(k) /
                          static_cast<double>(opts.exploration_decay_steps));
    const double eps =
        opts.exploration0 + frac * (opts.exploration_end - opts.exploration0);
    std::size_t a;
    if (gen.next_uniform() < eps) {
      a = static_cast<std::size_t>(gen.next_u64() % m);
    } else {
      a = greedy(state);
    }
    const std::size_t next = sample_next(state, a);
    const double lr =
        opts.learning_rate0 /
        std::pow(1.0 + static_cast<double>(k) / opts.learning_rate_tau,
                 opts.learning_rate_power);
    const double target =
        mdp.cost(state, a) + mdp.beta * result.q[next * m + greedy(next)];
    result.q[state * m + a] += lr * (target - result.q[state * m + a]);
    state = next;
  }

  result.policy.action.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.policy.action[i] = static_cast<std::uint32_t>(greedy(i));

  // Bellman residual against the exact kernel.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      double ev = 0.0;
      for (const auto& e : mdp.kernel.rows[a][i])
        ev += e.p * result.q[e.col * m + greedy(e.col)];
      const double target = mdp.cost(i, a) + mdp.beta * ev;
      result.bellman_residual = std::max(
          result.bellman_residual, std::abs(target - result.q[i * m + a]));
    }
  }
  result.steps = opts.steps;
  return result;
}

}  // namespace diffmdp
