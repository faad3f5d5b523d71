#pragma once

#include <cstdint>
#include <string>

#include "diffmdp/evaluation.hpp"
#include "diffmdp/kernel.hpp"
#include "diffmdp/lyapunov.hpp"
#include "diffmdp/measures.hpp"
#include "diffmdp/solvers.hpp"

namespace diffmdp {

/// Kernel exchange format: magic "DMDPKRN1", a length-prefixed JSON
/// header (dim, h, grid, actions, estimator metadata, seed), then per
/// (action, node) the row as a count followed by (column, probability)
/// pairs; little-endian, probabilities as 64-bit floats. Byte-identical
/// for identical inputs.
void save_kernel(const TransitionKernel& kernel, const std::string& path);
TransitionKernel load_kernel(const std::string& path);

struct SolutionRecord {
  ValueSolution solution;
  Policy policy;
  double h = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

/// Flat JSON record: kind, h, beta, alpha, gain, anchor, residual,
/// iterations, values, policy. Doubles round-trip exactly.
void save_solution(const SolutionRecord& record, const std::string& path);
SolutionRecord load_solution(const std::string& path);

/// (coordinate..., weight) rows, tab-separated.
void save_measure(const EmpiricalMeasure& measure, const std::string& path);

std::string continuous_drift_report_json(const ContinuousDriftReport& report);
std::string discrete_drift_report_json(const DiscreteDriftReport& report);

/// Shortest-round-trip decimal formatting used for all CSV numbers.
std::string format_double(double x);

std::string sweep_csv(const SweepTable& table);
std::string coupling_csv(const CouplingTable& table);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

/// Run manifest: command, config path + hash, seed, library version and
/// wall-clock timestamp (the only non-reproducible field).
void write_manifest(const std::string& path, const std::string& command,
                    const std::string& config_path, std::uint64_t master_seed);

}  // namespace diffmdp
