#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "diffmdp/measures.hpp"
#include "diffmdp/mdp.hpp"
#include "diffmdp/simulate.hpp"
#include "diffmdp/solvers.hpp"

namespace diffmdp {

/// Monte Carlo estimate of a cost functional on the diffusion.
struct RolloutEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
  double horizon = 0.0;
  /// bound_c * exp(-alpha * horizon) / alpha for discounted estimates,
  /// 0 for ergodic ones.
  double truncation_bound = 0.0;
  /// Set when the truncation bound exceeds the requested tolerance.
  bool truncation_warning = false;
};

/// Horizon making the discounted tail bound equal tol/2.
double discounted_horizon(double bound_c, double alpha, double tol);

/// Mean over replications of int_0^T exp(-alpha s) c(X_s, a_s) ds with
/// left-endpoint quadrature at resolution dt. Grid policies should be
/// wrapped as SampledFeedbackControl with period h (actions held constant
/// between sampling instants).
RolloutEstimate rollout_discounted(const DiffusionModel& model,
                                   const ControlSpec& control, ConstView x0,
                                   double alpha, double horizon, double dt,
                                   std::uint64_t replications, RandomSource rng,
                                   double tolerance = 0.0, unsigned threads = 1);

/// Mean over replications of the time average of c over [burn_in, T].
RolloutEstimate rollout_ergodic(const DiffusionModel& model,
                                const ControlSpec& control, ConstView x0,
                                double horizon, double burn_in, double dt,
                                std::uint64_t replications, RandomSource rng,
                                unsigned threads = 1);

/// Pathwise comparison of the discrete discounted sum against the
/// integral of the interpolated chain. The telescoped bound is
/// c_max * h per path, with c_max the largest running cost on the grid.
struct InterpolationGapReport {
  double max_gap = 0.0;
  double bound = 0.0;  // c_max * h
  std::uint64_t paths = 0;
  std::uint64_t steps_per_path = 0;
  bool pass = false;
};

InterpolationGapReport interpolation_gap_check(const SampledMdp& mdp,
                                               const Policy& policy, ConstView x0,
                                               std::uint64_t paths,
                                               std::uint64_t steps,
                                               RandomSource rng);

/// Synchronous coupling of the dt-fine diffusion under a feedback policy
/// against its h-sampled piecewise-constant realization, both driven by
/// the same Gaussian increments from the same start.
struct CouplingRow {
  double h = 0.0;
  std::uint64_t sampling_steps = 0;  // N with N h = horizon
  /// max_{n <= N} E |X_{nh} - X^h_n|^2
  double z = 0.0;
};

struct CouplingTable {
  std::vector<CouplingRow> rows;
  double fitted_slope = 0.0;  // log Z vs log h least squares
};

CouplingTable coupling_experiment(const DiffusionModel& model,
                                  const std::function<Vec(ConstView)>& policy,
                                  const std::vector<double>& h_list, double horizon,
                                  std::uint32_t dt_substeps,
                                  std::uint64_t replications, RandomSource rng,
                                  unsigned threads = 1);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SweepSettings {
  double alpha = 1.0;
  Vec x0;
  std::vector<double> h_list;  // strictly decreasing; last entry is the reference
  std::vector<std::uint32_t> action_counts;
  /// Fixed grid counts; when absent each h uses the default spacing rule.
  std::optional<std::vector<std::uint32_t>> grid_counts;
  EstimatorKind estimator = EstimatorKind::MonteCarlo;
  std::uint64_t kernel_samples = 20'000;
  std::uint32_t kernel_substeps = 4;
  double vi_tol = 1e-8;
  double rvi_tol = 1e-8;
  std::uint64_t iteration_cap = kDefaultIterationCap;
  std::uint64_t disc_replications = 2'000;
  double disc_tol = 2e-3;
  std::uint64_t erg_replications = 32;
  double erg_horizon = 200.0;
  double erg_burn_in = 20.0;
  std::uint32_t dt_substeps = 16;  // dt = h / dt_substeps everywhere
  std::uint64_t coupling_replications = 2'000;
  double coupling_horizon = 2.0;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

struct SweepRow {
  double h = 0.0;
  std::size_t grid_n = 0;
  std::size_t actions_m = 0;
  std::uint64_t samples = 0;
  double j_star_x0 = 0.0;
  double rho_h = 0.0;
  double rollout_disc_mean = 0.0;
  double rollout_disc_se = 0.0;
  double rollout_erg_mean = 0.0;
  double rollout_erg_se = 0.0;
  double gap_vs_ref = 0.0;
  double coupling_z = 0.0;
  double runtime_s = 0.0;
  std::uint64_t master_seed = 0;
  /// Carried along for the convergence acceptance checks (not a CSV column).
  double disc_truncation = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Per h: estimate the kernel, solve the discounted and average-cost
/// problems, roll both extracted policies out on the diffusion, and run
/// the synchronous-coupling probe under `coupling_policy`. Gaps are taken
/// against the finest h.
SweepTable value_convergence_sweep(const DiffusionModel& model, const Box& state_box,
                                   double sigma_min,
                                   const std::function<Vec(ConstView)>& coupling_policy,
                                   const SweepSettings& settings);

}  // namespace diffmdp
