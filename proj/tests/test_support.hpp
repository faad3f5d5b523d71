#pragma once

// Shared fixtures and small oracles for the test suites.

#include <array>
#include <cmath>

#include "diffmdp/mdp.hpp"
#include "diffmdp/solvers.hpp"

namespace diffmdp::testing {

inline SparseRow make_row(std::initializer_list<std::pair<std::uint32_t, double>> entries) {
  SparseRow row;
  for (const auto& [col, p] : entries) row.push_back({col, p});
  return row;
}

/// Hand-built MDP from explicit rows and stage costs (bypasses model and
/// estimation). Grid may be empty for state-space-free fixtures.
inline SampledMdp make_fixture_mdp(std::vector<std::vector<SparseRow>> rows,
                                   Vec stage_cost, double h, double alpha) {
  SampledMdp mdp;
  mdp.kernel.h = h;
  mdp.kernel.rows = std::move(rows);
  mdp.stage_cost = std::move(stage_cost);
  mdp.h = h;
  mdp.alpha = alpha;
  mdp.beta = std::exp(-alpha * h);
  return mdp;
}

/// The committed 2-node / 3-action fixture used across the solver, CLI
/// and acceptance suites.
inline SampledMdp two_node_fixture() {
  std::vector<std::vector<SparseRow>> rows(3, std::vector<SparseRow>(2));
  // action 0: strong pull to node 0
  rows[0][0] = make_row({{0, 0.9}, {1, 0.1}});
  rows[0][1] = make_row({{0, 0.7}, {1, 0.3}});
  // action 1: mild mixing
  rows[1][0] = make_row({{0, 0.6}, {1, 0.4}});
  rows[1][1] = make_row({{0, 0.2}, {1, 0.8}});
  // action 2: push to node 1
  rows[2][0] = make_row({{0, 0.1}, {1, 0.9}});
  rows[2][1] = make_row({{0, 0.05}, {1, 0.95}});
  const double h = 0.1;
  // stage costs c_h(i, a), node-major
  Vec stage_cost = {0.02, 0.011, 0.05,   // node 0
                    0.04, 0.03, 0.012};  // node 1
  return make_fixture_mdp(std::move(rows), std::move(stage_cost), h, 1.0);
}

/// Exact 2x2 solve of (I - beta P^pi) V = c^pi.
inline std::array<double, 2> solve_two_node_policy(const SampledMdp& mdp,
                                                   std::uint32_t a0,
                                                   std::uint32_t a1) {
  auto p = [&](std::uint32_t a, std::size_t i, std::size_t j) {
    for (const auto& e : mdp.kernel.rows[a][i])
      if (e.col == j) return e.p;
    return 0.0;
  };
  const double b = mdp.beta;
  const double m00 = 1.0 - b * p(a0, 0, 0);
  const double m01 = -b * p(a0, 0, 1);
  const double m10 = -b * p(a1, 1, 0);
  const double m11 = 1.0 - b * p(a1, 1, 1);
  const double c0 = mdp.cost(0, a0);
  const double c1 = mdp.cost(1, a1);
  const double det = m00 * m11 - m01 * m10;
  return {(c1 * -m01 + c0 * m11) / det, (c0 * -m10 + c1 * m00) / det};
}

/// Exhaustive discounted oracle: componentwise minimum over all
/// deterministic policies, with the minimizing policy (lowest indices on
/// ties).
inline std::pair<std::array<double, 2>, std::array<std::uint32_t, 2>>
brute_force_discounted(const SampledMdp& mdp) {
  std::array<double, 2> best = {1e300, 1e300};
  std::array<std::uint32_t, 2> arg = {0, 0};
  const auto m = static_cast<std::uint32_t>(mdp.n_actions());
  for (std::uint32_t a0 = 0; a0 < m; ++a0) {
    for (std::uint32_t a1 = 0; a1 < m; ++a1) {
      const auto v = solve_two_node_policy(mdp, a0, a1);
      if (v[0] < best[0] - 1e-14) {
        best[0] = v[0];
        arg[0] = a0;
      }
      if (v[1] < best[1] - 1e-14) {
        best[1] = v[1];
        arg[1] = a1;
      }
    }
  }
  return {best, arg};
}

/// Exhaustive average-cost oracle: stationary distribution of each 2x2
/// policy chain and the minimum average cost per unit time.
inline double brute_force_gain(const SampledMdp& mdp) {
  auto p = [&](std::uint32_t a, std::size_t i, std::size_t j) {
    for (const auto& e : mdp.kernel.rows[a][i])
      if (e.col == j) return e.p;
    return 0.0;
  };
  const auto m = static_cast<std::uint32_t>(mdp.n_actions());
  double best = 1e300;
  for (std::uint32_t a0 = 0; a0 < m; ++a0) {
    for (std::uint32_t a1 = 0; a1 < m; ++a1) {
      const double q01 = p(a0, 0, 1);
      const double q10 = p(a1, 1, 0);
      const double pi0 = q10 / (q01 + q10);
      const double pi1 = q01 / (q01 + q10);
      const double gain = (pi0 * mdp.cost(0, a0) + pi1 * mdp.cost(1, a1)) / mdp.h;
      best = std::min(best, gain);
    }
  }
  return best;
}

inline bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace diffmdp::testing
