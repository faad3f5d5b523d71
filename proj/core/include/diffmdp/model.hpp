#pragma once

#include <functional>
#include <string>

#include "diffmdp/rng.hpp"
#include "diffmdp/types.hpp"

namespace diffmdp {

/// Twice-differentiable scalar function with caller-supplied analytic
/// gradient and Hessian (row-major d x d).
struct ScalarField {
  std::function<double(ConstView)> value;
  std::function<void(ConstView, MutView)> gradient;
  std::function<void(ConstView, MutView)> hessian;
};

/// Controlled diffusion dX = b(X,U) dt + sigma(X) dW with running cost c.
/// The declared bounds and Lipschitz constants are contracts on the
/// callables; validate_model spot-checks them by sampling.
struct DiffusionModel {
  int dim = 1;          // state dimension
  int control_dim = 1;  // action dimension

  /// b(x, a) -> out, |out| = dim.
  std::function<void(ConstView x, ConstView a, MutView out)> drift;
  /// sigma(x) -> out, row-major dim x dim.
  std::function<void(ConstView x, MutView out)> sigma;
  /// c(x, a) >= 0.
  std::function<double(ConstView x, ConstView a)> running_cost;

  Box control_box;  // compact action set, one axis per control dimension

  double bound_b = 0.0;
  double bound_sigma = 0.0;
  double bound_c = 0.0;
  double lipschitz_b = 0.0;      // joint in (x, a)
  double lipschitz_sigma = 0.0;  // in x, Frobenius norm
  double lipschitz_c = 0.0;      // in x, uniform over actions
  /// Lower bound for the eigenvalues of a(x) = sigma sigma^T / 2 on the
  /// computational box.
  double nondegeneracy_floor = 0.0;

  Vec eval_drift(ConstView x, ConstView a) const {
    Vec out(dim);
    drift(x, a, out);
    return out;
  }

  Vec eval_sigma(ConstView x) const {
    Vec out(static_cast<std::size_t>(dim) * dim);
    sigma(x, out);
    return out;
  }
};

/// Drift under a finite mixture of actions: sum_i w_i b(x, a_i).
/// Throws NumericalError if the weights are not a probability vector
/// (nonnegative, summing to 1 within 1e-12).
Vec eval_relaxed_drift(const DiffusionModel& model, ConstView x,
                       const std::vector<Vec>& actions, ConstView weights);

/// Generator of the diffusion applied to f at (x, a):
///   trace(a(x) Hess f(x)) + b(x, a) . grad f(x),  a(x) = sigma sigma^T / 2.
double apply_generator(const DiffusionModel& model, const ScalarField& f,
                       ConstView x, ConstView a);

/// Result of the sampled contract checks on a model.
struct ModelValidation {
  bool pass = true;
  double worst_bound_excess = 0.0;      // max over samples of bound violations
  double worst_lipschitz_excess = 0.0;  // max two-point Lipschitz violation
  double min_eigen_a = 0.0;             // smallest eigenvalue of a(x) seen
  std::string detail;
};

/// Spot-checks the declared bounds, Lipschitz constants and the
/// nondegeneracy floor on random points of `box` (states) and the control
/// box (actions).
ModelValidation validate_model(const DiffusionModel& model, const Box& box,
                               RandomSource rng, int samples = 256);

/// Smallest eigenvalue of a symmetric matrix (row-major d x d), via
/// cyclic Jacobi; intended for the small dimensions used here.
double symmetric_min_eigenvalue(ConstView matrix, int d);

}  // namespace diffmdp
