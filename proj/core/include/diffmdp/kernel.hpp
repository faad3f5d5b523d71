#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diffmdp/grid.hpp"
#include "diffmdp/model.hpp"
#include "diffmdp/rng.hpp"

namespace diffmdp {

struct RowEntry {
  std::uint32_t col = 0;
  double p = 0.0;
};

/// One transition row, sorted by column, entries nonnegative, summing to 1
/// exactly after assembly renormalization.
using SparseRow = std::vector<RowEntry>;

enum class EstimatorKind { MonteCarlo, GaussHermite };

std::string to_string(EstimatorKind k);
EstimatorKind estimator_kind_from_string(const std::string& s);

struct KernelMeta {
  EstimatorKind kind = EstimatorKind::MonteCarlo;
  std::uint64_t samples = 0;
  std::uint32_t substeps = 1;
  RandomSource seed;
};

/// h-step controlled transition kernel on a grid: one row-stochastic
/// sparse matrix per action.
struct TransitionKernel {
  double h = 0.0;
  Grid grid;
  ActionNet actions;
  /// rows[a][i] is the distribution of the next node from node i under
  /// action a.
  std::vector<std::vector<SparseRow>> rows;
  KernelMeta meta;
  /// Max |row sum - 1| observed before exact renormalization.
  double pre_renorm_max_dev = 0.0;

  /// Node count from the row shape, so hand-built fixtures (e.g. a
  /// single-state problem, below the 2-nodes-per-axis grid minimum) work.
  std::size_t n_nodes() const {
    return rows.empty() ? grid.size() : rows.front().size();
  }
  std::size_t n_actions() const {
    return rows.empty() ? actions.size() : rows.size();
  }
};

/// Closed-loop chain: one row per node (the action already selected).
struct MarkovChainKernel {
  double h = 0.0;
  Grid grid;
  std::vector<SparseRow> rows;
};

/// Monte Carlo estimate of the h-step kernel. For each (node, action),
/// `samples` short Euler trajectories of length h (substep h/substeps,
/// action held fixed) are simulated; endpoints are clipped to the grid box
/// and deposited by cloud-in-cell weights, then rows are averaged and
/// renormalized. Task (i, a) draws from stream rng.stream_id + i*|A| + a,
/// so the kernel does not depend on thread count.
TransitionKernel estimate_kernel_mc(const DiffusionModel& model, const Grid& grid,
                                    const ActionNet& actions, double h,
                                    std::uint32_t substeps, std::uint64_t samples,
                                    RandomSource rng, unsigned threads = 1);

/// Deterministic 1-d alternative: a single Euler step over h has an
/// exactly Gaussian transition; integrate the deposition against it with
/// a fixed 21-node Gauss-Hermite rule.
TransitionKernel estimate_kernel_quadrature_1d(const DiffusionModel& model,
                                               const Grid& grid,
                                               const ActionNet& actions, double h);

/// Single-row Monte Carlo estimate (same construction as
/// estimate_kernel_mc for one (node, action) pair with an explicit
/// stream). Rows are renormalized.
SparseRow estimate_row_mc(const DiffusionModel& model, const Grid& grid,
                          ConstView action, std::size_t node, double h,
                          std::uint32_t substeps, std::uint64_t samples,
                          RandomSource stream);

/// Closed-loop chain under a feedback map evaluated at each node.
MarkovChainKernel estimate_feedback_chain_mc(
    const DiffusionModel& model, const Grid& grid,
    const std::function<Vec(ConstView)>& feedback, double h,
    std::uint32_t substeps, std::uint64_t samples, RandomSource rng,
    unsigned threads = 1);

/// Selects row policy[i] of each node from a per-action kernel.
MarkovChainKernel close_loop(const TransitionKernel& kernel,
                             const std::vector<std::uint32_t>& action_per_node);

double row_sum(const SparseRow& row);

/// 0.5 * sum |p_i - q_i| over the union of columns.
double row_total_variation(const SparseRow& a, const SparseRow& b);

/// Conservative standard-error estimate for every entry of a Monte Carlo
/// row: sqrt(p (1-p) / samples), summed over the row.
double row_pooled_standard_error(const SparseRow& row, std::uint64_t samples);

double row_mean_1d(const Grid& grid, const SparseRow& row);
double row_variance_1d(const Grid& grid, const SparseRow& row);

/// Nodes and weights of the fixed-order Gauss-Hermite rule used by the
/// quadrature estimator (integral against exp(-t^2)).
void gauss_hermite_rule(int order, std::vector<double>& nodes,
                        std::vector<double>& weights);

}  // namespace diffmdp
