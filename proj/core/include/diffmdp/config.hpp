#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffmdp/evaluation.hpp"
#include "diffmdp/registry.hpp"

namespace diffmdp {

/// Experiment description parsed from a JSON config file. Unknown keys
/// are rejected at every level. See README.md for the key reference.
struct ExperimentConfig {
  std::string model_id;
  double alpha = 1.0;
  std::vector<double> h_list;
  std::optional<std::vector<std::uint32_t>> grid_counts;
  std::vector<std::uint32_t> action_counts;  // defaulted from the model
  EstimatorKind estimator = EstimatorKind::MonteCarlo;
  std::uint64_t kernel_samples = 20'000;
  std::uint32_t kernel_substeps = 4;
  double vi_tol = 1e-8;
  double rvi_tol = 1e-8;
  std::uint64_t iteration_cap = 1'000'000;
  std::uint64_t disc_replications = 2'000;
  double disc_tol = 2e-3;
  std::uint64_t erg_replications = 32;
  double erg_horizon = 200.0;
  double erg_burn_in = 20.0;
  std::uint32_t dt_substeps = 16;
  std::uint64_t coupling_replications = 2'000;
  double coupling_horizon = 2.0;
  double lyap_slack = 1e-9;
  double epsilon_slack = 0.5;
  double longrun_horizon = 10'000.0;
  double longrun_burn_in = 100.0;
  double longrun_dt = 0.01;
  std::optional<Vec> x0;  // default: benchmark start point
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::string> kernel_file;

  BenchmarkModel benchmark() const { return make_benchmark(model_id); }
  Vec start_point(const BenchmarkModel& bench) const {
    return x0 ? *x0 : bench.x0;
  }
  unsigned effective_threads() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Maps the config onto the sweep settings (model-independent part).
SweepSettings sweep_settings(const ExperimentConfig& config,
                             const BenchmarkModel& bench);

}  // namespace diffmdp
