#include "diffmdp/evaluation.hpp"

#include <chrono>
#include <cmath>

#include "diffmdp/parallel.hpp"

namespace diffmdp {

namespace {

struct MeanStdErr {
  double mean = 0.0;
  double se = 0.0;
};

/// Two-pass reduction in replication order, so results do not depend on
/// how replications were scheduled across workers.
MeanStdErr reduce_replications(const Vec& values) {
  MeanStdErr out;
  const auto n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n * (n - 1.0)));
  }
  return out;
}

}  // namespace

double discounted_horizon(double bound_c, double alpha, double tol) {
  if (bound_c <= 0.0) return 1.0 / alpha;
  return std::log(2.0 * bound_c / (alpha * tol)) / alpha;
}

RolloutEstimate rollout_discounted(const DiffusionModel& model,
                                   const ControlSpec& control, ConstView x0,
                                   double alpha, double horizon, double dt,
                                   std::uint64_t replications, RandomSource rng,
                                   double tolerance, unsigned threads) {
  if (alpha <= 0.0) throw ConfigError("rollout: alpha must be positive");
  if (replications < 1) throw ConfigError("rollout: need at least one replication");

  Vec per_rep(replications, 0.0);
  const Vec start(x0.begin(), x0.end());
  parallel_for(replications, threads, [&](std::size_t r) {
    double acc = 0.0;
    simulate_steps(model, control, start, horizon, dt, rng.stream(rng.stream_id + r),
                   [&](std::size_t, double t, ConstView x, ConstView a, double step_dt) {
                     acc += std::exp(-alpha * t) * model.running_cost(x, a) * step_dt;
                   });
    per_rep[r] = acc;
  });

  const auto stats = reduce_replications(per_rep);
  RolloutEstimate est;
  est.mean = stats.mean;
  est.std_error = stats.se;
  est.replications = replications;
  est.horizon = horizon;
  est.truncation_bound = model.bound_c * std::exp(-alpha * horizon) / alpha;
  est.truncation_warning = tolerance > 0.0 && est.truncation_bound > tolerance;
  return est;
}

RolloutEstimate rollout_ergodic(const DiffusionModel& model,
                                const ControlSpec& control, ConstView x0,
                                double horizon, double burn_in, double dt,
                                std::uint64_t replications, RandomSource rng,
                                unsigned threads) {
  if (burn_in >= horizon) throw ConfigError("rollout: burn_in must precede horizon");
  if (replications < 1) throw ConfigError("rollout: need at least one replication");

  Vec per_rep(replications, 0.0);
  const Vec start(x0.begin(), x0.end());
  parallel_for(replications, threads, [&](std::size_t r) {
    double acc = 0.0;
    double measured = 0.0;
    simulate_steps(model, control, start, horizon, dt, rng.stream(rng.stream_id + r),
                   [&](std::size_t, double t, ConstView x, ConstView a, double step_dt) {
                     if (t >= burn_in) {
                       acc += model.running_cost(x, a) * step_dt;
                       measured += step_dt;
                     }
                   });
    per_rep[r] = acc / measured;
  });

  const auto stats = reduce_replications(per_rep);
  RolloutEstimate est;
  est.mean = stats.mean;
  est.std_error = stats.se;
  est.replications = replications;
  est.horizon = horizon;
  return est;
}

InterpolationGapReport interpolation_gap_check(const SampledMdp& mdp,
                                               const Policy& policy, ConstView x0,
                                               std::uint64_t paths,
                                               std::uint64_t steps,
                                               RandomSource rng) {
  if (policy.size() != mdp.n_nodes())
    throw ConfigError("interpolation gap check: policy length mismatch");

  InterpolationGapReport report;
  report.paths = paths;
  report.steps_per_path = steps;
  double c_max = 0.0;
  for (double c : mdp.stage_cost) c_max = std::max(c_max, c);
  c_max /= mdp.h;
  report.bound = c_max * mdp.h;

  const double alpha = mdp.alpha;
  const double beta = mdp.beta;
  const std::size_t start = mdp.grid.nearest(x0);

  for (std::uint64_t p = 0; p < paths; ++p) {
    Philox4x32 gen(rng.stream(rng.stream_id + p));
    std::size_t node = start;
    double disc_sum = 0.0;      // sum_k beta^k c_h(X_k, a_k)
    double interp_integral = 0.0;  // int exp(-alpha s) c(X^h(s), a(s)) ds
    double beta_k = 1.0;
    for (std::uint64_t k = 0; k < steps; ++k) {
      const auto a = policy.action[node];
      const double c = mdp.cost(node, a) / mdp.h;
      disc_sum += beta_k * c * mdp.h;
      // exact integral of exp(-alpha s) over [kh, (k+1)h)
      interp_integral += c * beta_k * (1.0 - beta) / alpha;
      beta_k *= beta;
      // advance the chain
      const double u = gen.next_uniform();
      double acc = 0.0;
      const auto& row = mdp.kernel.rows[a][node];
      std::size_t next = row.back().col;
      for (const auto& e : row) {
        acc += e.p;
        if (u <= acc) {
          next = e.col;
          break;
        }
      }
      node = next;
    }
    report.max_gap = std::max(report.max_gap, std::abs(disc_sum - interp_integral));
  }
  report.pass = report.max_gap <= report.bound + 1e-12;
  return report;
}

CouplingTable coupling_experiment(const DiffusionModel& model,
                                  const std::function<Vec(ConstView)>& policy,
                                  const std::vector<double>& h_list, double horizon,
                                  std::uint32_t dt_substeps,
                                  std::uint64_t replications, RandomSource rng,
                                  unsigned threads) {
  if (dt_substeps < 1) throw ConfigError("coupling: dt_substeps must be >= 1");
  CouplingTable table;
  const int d = model.dim;
  const Vec x0 = Vec(d, 0.0);

  for (std::size_t hi = 0; hi < h_list.size(); ++hi) {
    const double h = h_list[hi];
    const auto n_samples = static_cast<std::size_t>(std::llround(horizon / h));
    const double dt = h / static_cast<double>(dt_substeps);
    const RandomSource base = rng.stream(rng.stream_id + 1'000'003 * hi);

    // Per-replication squared distances at the sampling instants, reduced
    // afterwards in replication order.
    std::vector<Vec> sq(replications, Vec(n_samples + 1, 0.0));
    parallel_for(replications, threads, [&](std::size_t r) {
      GaussianStream noise(base.stream(base.stream_id + r));
      Vec x_fine(x0), x_chain(x0);
      Vec b(d), sig(static_cast<std::size_t>(d) * d), z(d);
      Vec a_chain = policy(x_chain);
      const double sqdt = std::sqrt(dt);
      for (std::size_t n = 1; n <= n_samples; ++n) {
        for (std::uint32_t s = 0; s < dt_substeps; ++s) {
          noise.fill(z);
          // fine system: feedback refreshed every dt
          const Vec a_fine = policy(x_fine);
          model.drift(x_fine, a_fine, b);
          model.sigma(x_fine, sig);
          for (int i = 0; i < d; ++i) {
            double diffusion = 0.0;
            for (int j = 0; j < d; ++j) diffusion += sig[i * d + j] * z[j];
            x_fine[i] += b[i] * dt + diffusion * sqdt;
          }
          // sampled system: action frozen at the block start
          model.drift(x_chain, a_chain, b);
          model.sigma(x_chain, sig);
          for (int i = 0; i < d; ++i) {
            double diffusion = 0.0;
            for (int j = 0; j < d; ++j) diffusion += sig[i * d + j] * z[j];
            x_chain[i] += b[i] * dt + diffusion * sqdt;
          }
        }
        for (int i = 0; i < d; ++i) {
          if (!std::isfinite(x_fine[i]) || !std::isfinite(x_chain[i]))
            throw SimulationDiverged("coupling: trajectory diverged", n);
        }
        sq[r][n] = euclid_dist2(x_fine, x_chain);
        a_chain = policy(x_chain);
      }
    });

    CouplingRow row;
    row.h = h;
    row.sampling_steps = n_samples;
    for (std::size_t n = 0; n <= n_samples; ++n) {
      double mean = 0.0;
      for (std::uint64_t r = 0; r < replications; ++r) mean += sq[r][n];
      mean /= static_cast<double>(replications);
      row.z = std::max(row.z, mean);
    }
    table.rows.push_back(row);
  }

  std::vector<double> hs, zs;
  for (const auto& row : table.rows) {
    if (row.z > 0.0) {
      hs.push_back(row.h);
      zs.push_back(row.z);
    }
  }
  table.fitted_slope = hs.size() >= 2 ? fit_loglog_slope(hs, zs) : 0.0;
  return table;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("slope fit: need at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepTable value_convergence_sweep(const DiffusionModel& model, const Box& state_box,
                                   double sigma_min,
                                   const std::function<Vec(ConstView)>& coupling_policy,
                                   const SweepSettings& s) {
  if (s.h_list.empty()) throw ConfigError("sweep: empty h list");
  for (std::size_t i = 1; i < s.h_list.size(); ++i)
    if (s.h_list[i] >= s.h_list[i - 1])
      throw ConfigError("sweep: h_list must be strictly decreasing");

  SweepTable table;
  const ActionNet actions = build_action_net(model.control_box, s.action_counts);

  for (std::size_t hi = 0; hi < s.h_list.size(); ++hi) {
    const double h = s.h_list[hi];
    const auto t0 = std::chrono::steady_clock::now();

    const Grid grid = s.grid_counts ? build_grid(state_box, *s.grid_counts)
                                    : build_default_grid(state_box, sigma_min, h);
    TransitionKernel kernel =
        s.estimator == EstimatorKind::GaussHermite
            ? estimate_kernel_quadrature_1d(model, grid, actions, h)
            : estimate_kernel_mc(model, grid, actions, h, s.kernel_substeps,
                                 s.kernel_samples,
                                 phase_source(s.master_seed, kPhaseKernel, hi),
                                 s.threads);
    const SampledMdp mdp = assemble_mdp(model, grid, actions, std::move(kernel), s.alpha);

    auto [vi_sol, vi_policy] = value_iteration(mdp, s.vi_tol, s.iteration_cap);
    const std::size_t anchor = grid.nearest(s.x0);
    auto [rvi_sol, rvi_policy] =
        relative_value_iteration(mdp, s.rvi_tol, anchor, s.iteration_cap);

    const double dt = h / static_cast<double>(s.dt_substeps);
    const double disc_T = discounted_horizon(model.bound_c, s.alpha, s.disc_tol);
    const auto disc = rollout_discounted(
        model,
        SampledFeedbackControl{grid_policy_feedback(grid, actions, vi_policy), h},
        s.x0, s.alpha, disc_T, dt, s.disc_replications,
        phase_source(s.master_seed, kPhaseDiscountedRollout, hi), s.disc_tol,
        s.threads);
    const auto erg = rollout_ergodic(
        model,
        SampledFeedbackControl{grid_policy_feedback(grid, actions, rvi_policy), h},
        s.x0, s.erg_horizon, s.erg_burn_in, dt, s.erg_replications,
        phase_source(s.master_seed, kPhaseErgodicRollout, hi), s.threads);

    const auto coupling = coupling_experiment(
        model, coupling_policy, {h}, s.coupling_horizon, s.dt_substeps,
        s.coupling_replications, phase_source(s.master_seed, kPhaseCoupling, hi),
        s.threads);

    SweepRow row;
    row.h = h;
    row.grid_n = grid.size();
    row.actions_m = actions.size();
    row.samples = s.estimator == EstimatorKind::GaussHermite ? 0 : s.kernel_samples;
    row.j_star_x0 = vi_sol.values[grid.nearest(s.x0)];
    row.rho_h = rvi_sol.gain.value();
    row.rollout_disc_mean = disc.mean;
    row.rollout_disc_se = disc.std_error;
    row.rollout_erg_mean = erg.mean;
    row.rollout_erg_se = erg.std_error;
    row.coupling_z = coupling.rows.front().z;
    row.master_seed = s.master_seed;
    row.disc_truncation = disc.truncation_bound;
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
    table.rows.push_back(row);
  }

  const SweepRow& ref = table.rows.back();
  for (auto& row : table.rows)
    row.gap_vs_ref = std::abs(row.j_star_x0 - ref.j_star_x0);
  return table;
}

}  // namespace diffmdp
