#include "diffmdp/kernel.hpp"

#include <cmath>

#include "diffmdp/parallel.hpp"

namespace diffmdp {

std::string to_string(EstimatorKind k) {
  return k == EstimatorKind::MonteCarlo ? "mc" : "gh";
}

EstimatorKind estimator_kind_from_string(const std::string& s) {
  if (s == "mc") return EstimatorKind::MonteCarlo;
  if (s == "gh") return EstimatorKind::GaussHermite;
  throw ConfigError("unknown kernel estimator '" + s + "' (expected mc or gh)");
}

namespace {

constexpr int kGaussHermiteOrder = 21;

/// Accumulates deposits into a dense row, then compresses.
struct RowAccumulator {
  explicit RowAccumulator(std::size_t n) : dense(n, 0.0) {}

  void add(const std::vector<Deposit>& deposits, double scale) {
    for (const auto& d : deposits) dense[d.node] += d.weight * scale;
  }

  /// Returns |sum - 1| before renormalization; the compressed row sums to
  /// 1 exactly afterwards.
  double finish(SparseRow& out) {
    double sum = 0.0;
    for (double v : dense) sum += v;
    const double dev = std::abs(sum - 1.0);
    out.clear();
    for (std::size_t j = 0; j < dense.size(); ++j)
      if (dense[j] > 0.0)
        out.push_back({static_cast<std::uint32_t>(j), dense[j] / sum});
    return dev;
  }

  Vec dense;
};

/// One endpoint of an Euler trajectory of length h from x under a fixed
/// action.
void euler_endpoint(const DiffusionModel& model, ConstView x, ConstView action,
                    double h, std::uint32_t substeps, GaussianStream& noise,
                    Vec& state, Vec& b, Vec& sig, Vec& z, std::size_t task) {
  const int d = model.dim;
  state.assign(x.begin(), x.end());
  const double dt = h / static_cast<double>(substeps);
  const double sqdt = std::sqrt(dt);
  for (std::uint32_t s = 0; s < substeps; ++s) {
    model.drift(state, action, b);
    model.sigma(state, sig);
    noise.fill(z);
    for (int i = 0; i < d; ++i) {
      double diffusion = 0.0;
      for (int j = 0; j < d; ++j) diffusion += sig[i * d + j] * z[j];
      state[i] += b[i] * dt + diffusion * sqdt;
    }
  }
  for (double v : state)
    if (!std::isfinite(v))
      throw SimulationDiverged("kernel estimation: trajectory diverged", task);
}

double estimate_row_into(const DiffusionModel& model, const Grid& grid,
                         ConstView x, ConstView action, double h,
                         std::uint32_t substeps, std::uint64_t samples,
                         RandomSource stream, SparseRow& out, std::size_t task) {
  GaussianStream noise(stream);
  RowAccumulator acc(grid.size());
  std::vector<Deposit> deposits;
  const int d = model.dim;
  Vec state(d), b(d), sig(static_cast<std::size_t>(d) * d), z(d);
  const double scale = 1.0 / static_cast<double>(samples);
  for (std::uint64_t s = 0; s < samples; ++s) {
    euler_endpoint(model, x, action, h, substeps, noise, state, b, sig, z, task);
    deposit_cloud_in_cell(grid, state, deposits);
    acc.add(deposits, scale);
  }
  return acc.finish(out);
}

}  // namespace

TransitionKernel estimate_kernel_mc(const DiffusionModel& model, const Grid& grid,
                                    const ActionNet& actions, double h,
                                    std::uint32_t substeps, std::uint64_t samples,
                                    RandomSource rng, unsigned threads) {
  if (substeps < 1 || samples < 1)
    throw ConfigError("kernel estimation: substeps and samples must be >= 1");
  if (h <= 0.0) throw ConfigError("kernel estimation: h must be positive");

  TransitionKernel kernel;
  kernel.h = h;
  kernel.grid = grid;
  kernel.actions = actions;
  kernel.meta = {EstimatorKind::MonteCarlo, samples, substeps, rng};
  const std::size_t n = grid.size();
  const std::size_t m = actions.size();
  kernel.rows.assign(m, std::vector<SparseRow>(n));
  std::vector<double> deviations(n * m, 0.0);

  parallel_for(n * m, threads, [&](std::size_t task) {
    const std::size_t i = task / m;
    const std::size_t a = task % m;
    const Vec x = grid.coordinate(i);
    const RandomSource stream = rng.stream(rng.stream_id + i * m + a);
    deviations[task] = estimate_row_into(model, grid, x, actions.actions[a], h,
                                         substeps, samples, stream,
                                         kernel.rows[a][i], task);
  });

  for (double dev : deviations)
    kernel.pre_renorm_max_dev = std::max(kernel.pre_renorm_max_dev, dev);
  return kernel;
}

SparseRow estimate_row_mc(const DiffusionModel& model, const Grid& grid,
                          ConstView action, std::size_t node, double h,
                          std::uint32_t substeps, std::uint64_t samples,
                          RandomSource stream) {
  SparseRow row;
  const Vec x = grid.coordinate(node);
  estimate_row_into(model, grid, x, action, h, substeps, samples, stream, row, node);
  return row;
}

MarkovChainKernel estimate_feedback_chain_mc(
    const DiffusionModel& model, const Grid& grid,
    const std::function<Vec(ConstView)>& feedback, double h,
    std::uint32_t substeps, std::uint64_t samples, RandomSource rng,
    unsigned threads) {
  MarkovChainKernel chain;
  chain.h = h;
  chain.grid = grid;
  chain.rows.assign(grid.size(), {});
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const Vec x = grid.coordinate(i);
    const Vec a = feedback(x);
    const RandomSource stream = rng.stream(rng.stream_id + i);
    estimate_row_into(model, grid, x, a, h, substeps, samples, stream,
                      chain.rows[i], i);
  });
  return chain;
}

MarkovChainKernel close_loop(const TransitionKernel& kernel,
                             const std::vector<std::uint32_t>& action_per_node) {
  if (action_per_node.size() != kernel.n_nodes())
    throw ConfigError("close_loop: policy length does not match node count");
  MarkovChainKernel chain;
  chain.h = kernel.h;
  chain.grid = kernel.grid;
  chain.rows.reserve(kernel.n_nodes());
  for (std::size_t i = 0; i < kernel.n_nodes(); ++i) {
    const auto a = action_per_node[i];
    if (a >= kernel.n_actions())
      throw ConfigError("close_loop: action index out of range");
    chain.rows.push_back(kernel.rows[a][i]);
  }
  return chain;
}

TransitionKernel estimate_kernel_quadrature_1d(const DiffusionModel& model,
                                               const Grid& grid,
                                               const ActionNet& actions, double h) {
  if (model.dim != 1)
    throw ConfigError("quadrature kernel estimator supports dim = 1 only");
  if (h <= 0.0) throw ConfigError("kernel estimation: h must be positive");

  std::vector<double> nodes, weights;
  gauss_hermite_rule(kGaussHermiteOrder, nodes, weights);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));

  TransitionKernel kernel;
  kernel.h = h;
  kernel.grid = grid;
  kernel.actions = actions;
  kernel.meta = {EstimatorKind::GaussHermite, 0, 1, RandomSource{}};
  const std::size_t n = grid.size();
  const std::size_t m = actions.size();
  kernel.rows.assign(m, std::vector<SparseRow>(n));

  Vec b(1), sig(1), point(1);
  std::vector<Deposit> deposits;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec x = grid.coordinate(i);
      model.drift(x, actions.actions[a], b);
      model.sigma(x, sig);
      const double mean = x[0] + b[0] * h;
      const double sd = std::abs(sig[0]) * std::sqrt(h);
      RowAccumulator acc(n);
      for (int q = 0; q < kGaussHermiteOrder; ++q) {
        point[0] = mean + sd * std::sqrt(2.0) * nodes[q];
        deposit_cloud_in_cell(grid, point, deposits);
        acc.add(deposits, weights[q] * inv_sqrt_pi);
      }
      const double dev = acc.finish(kernel.rows[a][i]);
      kernel.pre_renorm_max_dev = std::max(kernel.pre_renorm_max_dev, dev);
    }
  }
  return kernel;
}

void gauss_hermite_rule(int order, std::vector<double>& nodes,
                        std::vector<double>& weights) {
  // Newton iteration on the (orthonormalized) Hermite recurrence.
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const long double pim4 = 0.7511255444649424828587030047762276930510L;
  const int m = (order + 1) / 2;
  long double z = 0.0L;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(static_cast<long double>(2 * order + 1)) -
          1.85575L * std::pow(static_cast<long double>(2 * order + 1), -1.0L / 6.0L);
    } else if (i == 1) {
      z -= 1.14L * std::pow(static_cast<long double>(order), 0.426L) / z;
    } else if (i == 2) {
      z = 1.86L * z - 0.86L * nodes[0];
    } else if (i == 3) {
      z = 1.91L * z - 0.91L * nodes[1];
    } else {
      z = 2.0L * z - nodes[i - 2];
    }
    long double pp = 0.0L;
    for (int iter = 0; iter < 128; ++iter) {
      long double p1 = pim4;
      long double p2 = 0.0L;
      for (int j = 1; j <= order; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / j) * p2 - std::sqrt((j - 1.0L) / j) * p3;
      }
      pp = std::sqrt(2.0L * order) * p2;
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-18L) break;
    }
    nodes[i] = static_cast<double>(z);
    nodes[order - 1 - i] = -nodes[i];
    weights[i] = static_cast<double>(2.0L / (pp * pp));
    weights[order - 1 - i] = weights[i];
  }
  if (order % 2 == 1) nodes[m - 1] = 0.0;  // exact symmetry at the center
}

double row_sum(const SparseRow& row) {
  double s = 0.0;
  for (const auto& e : row) s += e.p;
  return s;
}

double row_total_variation(const SparseRow& a, const SparseRow& b) {
  double tv = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].col < b[j].col)) {
      tv += a[i++].p;
    } else if (i >= a.size() || b[j].col < a[i].col) {
      tv += b[j++].p;
    } else {
      tv += std::abs(a[i].p - b[j].p);
      ++i;
      ++j;
    }
  }
  return 0.5 * tv;
}

double row_pooled_standard_error(const SparseRow& row, std::uint64_t samples) {
  double se = 0.0;
  for (const auto& e : row)
    se += std::sqrt(std::max(0.0, e.p * (1.0 - e.p)) / static_cast<double>(samples));
  return se;
}

double row_mean_1d(const Grid& grid, const SparseRow& row) {
  double mean = 0.0;
  for (const auto& e : row) mean += e.p * grid.coordinate(e.col)[0];
  return mean;
}

double row_variance_1d(const Grid& grid, const SparseRow& row) {
  const double mean = row_mean_1d(grid, row);
  double var = 0.0;
  for (const auto& e : row) {
    const double d = grid.coordinate(e.col)[0] - mean;
    var += e.p * d * d;
  }
  return var;
}

}  // namespace diffmdp
