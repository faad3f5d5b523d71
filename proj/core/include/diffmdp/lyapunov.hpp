#pragma once

#include <cstdint>
#include <string>

#include "diffmdp/grid.hpp"
#include "diffmdp/kernel.hpp"
#include "diffmdp/model.hpp"

namespace diffmdp {

/// Candidate drift certificate: an inf-compact function V with constants
/// C0, C1 and a compact box K, claiming L_u V <= C0 1_K - C1 V for all
/// actions. The tool verifies certificates; it does not synthesize them.
struct LyapunovCertificate {
  ScalarField V;
  double C0 = 0.0;
  double C1 = 0.0;
  Box K;
};

/// Verdict of the node-wise certificate sanity checks: V >= 0 on the box
/// and the box minimum attained strictly inside (a proxy for
/// inf-compactness on the truncated domain).
struct CertificateSanity {
  bool nonnegative = true;
  bool interior_minimum = true;
};

CertificateSanity certificate_sanity(const LyapunovCertificate& cert,
                                     const Grid& grid);

struct ContinuousDriftReport {
  bool pass = false;
  /// max over (node, action) of L_a V(x) - (C0 1_K(x) - C1 V(x)); the
  /// check passes iff this is <= slack.
  double worst_violation = 0.0;
  std::size_t worst_node = 0;
  std::size_t worst_action = 0;
  Vec worst_x;
  double slack = 1e-9;
  CertificateSanity sanity;
};

/// Evaluates the continuous drift inequality at every grid node and net
/// action. Violations are report content, not errors.
ContinuousDriftReport check_continuous_drift(const DiffusionModel& model,
                                             const LyapunovCertificate& cert,
                                             const Grid& grid,
                                             const ActionNet& actions,
                                             double slack = 1e-9,
                                             unsigned threads = 1);

struct DiscreteDriftReport {
  /// Smallest c0_hat such that sum_j P[a][i][j] V(x_j) <= (1-eps) V(x_i)
  /// + c0_hat on K_hat and <= (1-eps) V(x_i) off K_hat, with
  /// K_hat = {V <= c0_hat / denom}.
  double c0_hat = 0.0;
  double epsilon = 0.0;
  double denom = 0.0;      // (1 - eps - exp(-C1 h)) + eps * epsilon_slack
  double threshold = 0.0;  // c0_hat / denom
  std::size_t khat_count = 0;
  bool khat_strictly_interior = false;
  bool feasible = false;  // a finite c0_hat exists (denom > 0)
  bool pass = false;      // feasible and K_hat strictly inside the box
  /// Largest drift excess over nodes that must lie outside K_hat.
  double worst_outside = 0.0;
  std::size_t worst_node = 0;
  std::size_t worst_action = 0;
  CertificateSanity sanity;
};

/// Discrete Foster-Lyapunov check on an estimated kernel with
/// eps = 1 - exp(-C1 h) (or a caller-supplied smaller eps). The sublevel
/// threshold denominator uses eps * epsilon_slack to keep K_hat finite
/// when eps sits exactly at its upper bound.
DiscreteDriftReport check_discrete_drift(const TransitionKernel& kernel,
                                         const LyapunovCertificate& cert,
                                         double h, double epsilon_slack = 0.5,
                                         double epsilon_override = -1.0);

/// True when the certificate's invariant sublevel set
/// {V <= C0/C1 * (1 + margin)} stays strictly inside the grid box; the
/// CLI warns when it does not.
bool sublevel_set_inside_box(const LyapunovCertificate& cert, const Grid& grid,
                             double margin = 0.2);

}  // namespace diffmdp
