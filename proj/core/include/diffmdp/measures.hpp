#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diffmdp/kernel.hpp"
#include "diffmdp/model.hpp"
#include "diffmdp/solvers.hpp"

namespace diffmdp {

enum class MeasureProvenance { ChainStationary, DiffusionLongrun };

/// Probability measure with finite support: grid nodes (chain stationary)
/// or trajectory samples with uniform weights (diffusion long run).
struct EmpiricalMeasure {
  Box box;
  std::vector<Vec> support;
  Vec weights;
  MeasureProvenance provenance = MeasureProvenance::ChainStationary;

  double integrate(const std::function<double(ConstView)>& f) const;
};

struct StationaryResult {
  EmpiricalMeasure measure;
  double residual = 0.0;
  std::uint64_t iterations = 0;
  /// False when a second, different starting distribution converged to a
  /// visibly different limit (suggesting a reducible chain as with an
  /// identity kernel).
  bool unique_hint = true;
};

/// Power iteration mu <- mu P from the uniform distribution until the L1
/// successive difference drops below tol.
StationaryResult stationary_distribution(const MarkovChainKernel& chain, double tol,
                                         std::uint64_t iteration_cap = 1'000'000);

/// Convenience overload: closes the loop of a per-action kernel first.
StationaryResult stationary_distribution(const TransitionKernel& kernel,
                                         const Policy& policy, double tol,
                                         std::uint64_t iteration_cap = 1'000'000);

/// Long-run occupation measure of the diffusion under a feedback policy:
/// one trajectory, Euler step dt, states sampled every `spacing` time
/// units after burn_in, uniform weights.
EmpiricalMeasure empirical_invariant_measure(
    const DiffusionModel& model, const std::function<Vec(ConstView)>& feedback,
    const Box& box, double horizon, double burn_in, double dt, double spacing,
    RandomSource rng);

/// Wraps a grid policy as a feedback map via nearest-node lookup.
std::function<Vec(ConstView)> grid_policy_feedback(const Grid& grid,
                                                   const ActionNet& actions,
                                                   const Policy& policy);

/// Fixed, deterministic set of test functions with bounded-Lipschitz norm
/// at most 1, built from a box: scaled coordinate maps plus products of
/// tanh sigmoids at lattice offsets.
struct BLDictionary {
  Box box;
  std::vector<std::function<double(ConstView)>> functions;
};

BLDictionary build_bl_dictionary(const Box& box, std::size_t count = 64);

/// max_f |int f dmu1 - int f dmu2| over the dictionary: a lower bound on
/// the bounded-Lipschitz distance, adequate for monotone trend checks.
double bl_distance(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                   const BLDictionary& dictionary);

}  // namespace diffmdp
