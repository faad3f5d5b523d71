#include "diffmdp/lyapunov.hpp"

#include <cmath>
#include <limits>

#include "diffmdp/parallel.hpp"

namespace diffmdp {

CertificateSanity certificate_sanity(const LyapunovCertificate& cert,
                                     const Grid& grid) {
  CertificateSanity sanity;
  double interior_min = std::numeric_limits<double>::infinity();
  double boundary_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = cert.V.value(grid.coordinate(i));
    if (v < -1e-12) sanity.nonnegative = false;
    if (grid.is_boundary(i))
      boundary_min = std::min(boundary_min, v);
    else
      interior_min = std::min(interior_min, v);
  }
  // Strictly smaller interior minimum; a flat V (e.g. V = 0) fails.
  sanity.interior_minimum = interior_min < boundary_min;
  return sanity;
}

ContinuousDriftReport check_continuous_drift(const DiffusionModel& model,
                                             const LyapunovCertificate& cert,
                                             const Grid& grid,
                                             const ActionNet& actions,
                                             double slack, unsigned threads) {
  ContinuousDriftReport report;
  report.slack = slack;
  report.sanity = certificate_sanity(cert, grid);
  report.worst_violation = -std::numeric_limits<double>::infinity();

  const std::size_t n = grid.size();
  const std::size_t m = actions.size();
  std::vector<double> worst_per_node(n, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> worst_action_per_node(n, 0);

  parallel_for(n, threads, [&](std::size_t i) {
    const Vec x = grid.coordinate(i);
    const double v = cert.V.value(x);
    const double rhs = (cert.K.contains(x) ? cert.C0 : 0.0) - cert.C1 * v;
    for (std::size_t a = 0; a < m; ++a) {
      const double lhs = apply_generator(model, cert.V, x, actions.actions[a]);
      const double violation = lhs - rhs;
      if (violation > worst_per_node[i]) {
        worst_per_node[i] = violation;
        worst_action_per_node[i] = a;
      }
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (worst_per_node[i] > report.worst_violation) {
      report.worst_violation = worst_per_node[i];
      report.worst_node = i;
      report.worst_action = worst_action_per_node[i];
    }
  }
  report.worst_x = grid.coordinate(report.worst_node);
  report.pass = report.worst_violation <= slack;
  return report;
}

DiscreteDriftReport check_discrete_drift(const TransitionKernel& kernel,
                                         const LyapunovCertificate& cert,
                                         double h, double epsilon_slack,
                                         double epsilon_override) {
  if (std::abs(kernel.h - h) > 1e-12)
    throw ConfigError("discrete drift check: kernel h differs from requested h");
  if (epsilon_slack <= 0.0)
    throw ConfigError("discrete drift check: epsilon_slack must be positive");

  DiscreteDriftReport report;
  const double decay = std::exp(-cert.C1 * h);
  report.epsilon = epsilon_override > 0.0 ? epsilon_override : 1.0 - decay;
  if (report.epsilon > 1.0 - decay + 1e-15)
    throw ConfigError("discrete drift check: epsilon exceeds 1 - exp(-C1 h)");
  report.denom = (1.0 - report.epsilon - decay) + report.epsilon * epsilon_slack;
  report.sanity = certificate_sanity(cert, kernel.grid);
  if (report.denom <= 0.0) {
    report.feasible = false;
    return report;
  }

  const Grid& grid = kernel.grid;
  const std::size_t n = grid.size();
  const std::size_t m = kernel.n_actions();
  Vec v_at(n);
  for (std::size_t j = 0; j < n; ++j) v_at[j] = cert.V.value(grid.coordinate(j));

  // Worst drift excess D(i) = max_a E_a[V | i] - (1 - eps) V(x_i).
  Vec excess(n);
  std::vector<std::size_t> excess_action(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_a = 0;
    for (std::size_t a = 0; a < m; ++a) {
      double ev = 0.0;
      for (const auto& e : kernel.rows[a][i]) ev += e.p * v_at[e.col];
      const double d = ev - (1.0 - report.epsilon) * v_at[i];
      if (d > worst) {
        worst = d;
        worst_a = a;
      }
    }
    excess[i] = worst;
    excess_action[i] = worst_a;
  }

  // Nodes with positive excess must belong to K_hat; the smallest
  // feasible c0_hat covers both their excess and (via the threshold) the
  // largest V among them. Feasibility in c0_hat is monotone, so this
  // direct formula is exact.
  constexpr double tol0 = 1e-12;
  double need_excess = 0.0;
  double need_v = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (excess[i] > tol0) {
      any = true;
      need_excess = std::max(need_excess, excess[i]);
      need_v = std::max(need_v, v_at[i]);
    }
  }
  report.feasible = true;
  report.c0_hat = any ? std::max(need_excess, need_v * report.denom) : 0.0;
  report.threshold = report.c0_hat / report.denom;

  report.khat_strictly_interior = true;
  report.worst_outside = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const bool inside = v_at[i] <= report.threshold;
    if (inside) {
      ++report.khat_count;
      if (grid.is_boundary(i)) report.khat_strictly_interior = false;
    } else if (excess[i] > report.worst_outside) {
      report.worst_outside = excess[i];
      report.worst_node = i;
      report.worst_action = excess_action[i];
    }
  }
  report.pass = report.feasible && report.khat_strictly_interior;
  return report;
}

bool sublevel_set_inside_box(const LyapunovCertificate& cert, const Grid& grid,
                             double margin) {
  if (cert.C1 <= 0.0) return false;
  const double level = cert.C0 / cert.C1 * (1.0 + margin);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_boundary(i) && cert.V.value(grid.coordinate(i)) <= level)
      return false;
  }
  return true;
}

}  // namespace diffmdp
