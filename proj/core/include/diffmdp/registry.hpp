#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diffmdp/lyapunov.hpp"
#include "diffmdp/model.hpp"

namespace diffmdp {

/// A registered benchmark: model, computational box, default start point,
/// the sigma scale feeding the grid spacing rule, an optional drift
/// certificate and a fixed Lipschitz reference policy for coupling and
/// invariant-measure studies.
struct BenchmarkModel {
  std::string id;
  DiffusionModel model;
  Box state_box;
  Vec x0;
  double sigma_min = 0.0;
  std::optional<LyapunovCertificate> certificate;
  std::function<Vec(ConstView)> reference_policy;
};

/// Registered ids:
///  - const_cost:      1-d stable drift, c = 1 (analytic identities)
///  - bounded_ou:      1-d, b = -tanh(2x) + a, a in [-1/2, 1/2],
///                     sigma = 1/2, c = x^2/(1+x^2) + a^2/10, box [-4, 4],
///                     cosh(x/2) certificate on K = [-2, 2]
///  - uncontrolled_1d: bounded_ou dynamics without control, for Monte
///                     Carlo cross-checks
BenchmarkModel make_benchmark(const std::string& id);

std::vector<std::string> benchmark_ids();

}  // namespace diffmdp
