#include "diffmdp/model.hpp"

#include <cmath>
#include <limits>

namespace diffmdp {

Vec eval_relaxed_drift(const DiffusionModel& model, ConstView x,
                       const std::vector<Vec>& actions, ConstView weights) {
  if (actions.size() != weights.size())
    throw ConfigError("relaxed drift: actions and weights differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0)
      throw NumericalError("relaxed drift: invalid distribution (negative weight)");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw NumericalError("relaxed drift: invalid distribution (weights sum to " +
                         std::to_string(total) + ")");
  Vec out(model.dim, 0.0);
  Vec b(model.dim);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    model.drift(x, actions[i], b);
    for (int k = 0; k < model.dim; ++k) out[k] += weights[i] * b[k];
  }
  return out;
}

double apply_generator(const DiffusionModel& model, const ScalarField& f,
                       ConstView x, ConstView a) {
  const int d = model.dim;
  Vec grad(d), hess(static_cast<std::size_t>(d) * d);
  f.gradient(x, grad);
  f.hessian(x, hess);

  Vec sig(static_cast<std::size_t>(d) * d);
  model.sigma(x, sig);
  // a = sigma sigma^T / 2; accumulate trace(a * hess) directly.
  double second_order = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double aij = 0.0;
      for (int k = 0; k < d; ++k) aij += sig[i * d + k] * sig[j * d + k];
      aij *= 0.5;
      second_order += aij * hess[j * d + i];
    }
  }

  Vec b(d);
  model.drift(x, a, b);
  double first_order = 0.0;
  for (int i = 0; i < d; ++i) first_order += b[i] * grad[i];

  return second_order + first_order;
}

double symmetric_min_eigenvalue(ConstView matrix, int d) {
  std::vector<double> m(matrix.begin(), matrix.end());
  auto at = [&](int i, int j) -> double& { return m[i * d + j]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < d; ++k) {
          const double mkp = at(k, p), mkq = at(k, q);
          at(k, p) = c * mkp - s * mkq;
          at(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < d; ++k) {
          const double mpk = at(p, k), mqk = at(q, k);
          at(p, k) = c * mpk - s * mqk;
          at(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  double lo = at(0, 0);
  for (int i = 1; i < d; ++i) lo = std::min(lo, at(i, i));
  return lo;
}

namespace {

Vec random_point(const Box& box, Philox4x32& rng) {
  Vec x(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const auto& ax = box.axes[i];
    x[i] = ax.lo + ax.width() * rng.next_uniform();
  }
  return x;
}

double frobenius_diff(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double frobenius(ConstView a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

}  // namespace

ModelValidation validate_model(const DiffusionModel& model, const Box& box,
                               RandomSource rng, int samples) {
  if (static_cast<int>(box.dim()) != model.dim)
    throw ConfigError("validate_model: box dimension does not match model");
  ModelValidation report;
  report.min_eigen_a = std::numeric_limits<double>::infinity();
  Philox4x32 gen(rng);
  const int d = model.dim;
  Vec b(d), sig(static_cast<std::size_t>(d) * d), a_mat(sig.size());
  const double slack = 1e-9;

  for (int s = 0; s < samples; ++s) {
    const Vec x = random_point(box, gen);
    const Vec u = random_point(model.control_box, gen);

    model.drift(x, u, b);
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    report.worst_bound_excess =
        std::max(report.worst_bound_excess, bnorm - model.bound_b);

    model.sigma(x, sig);
    report.worst_bound_excess =
        std::max(report.worst_bound_excess, frobenius(sig) - model.bound_sigma);

    const double c = model.running_cost(x, u);
    report.worst_bound_excess = std::max(report.worst_bound_excess, -c);
    report.worst_bound_excess = std::max(report.worst_bound_excess, c - model.bound_c);

    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double aij = 0.0;
        for (int k = 0; k < d; ++k) aij += sig[i * d + k] * sig[j * d + k];
        a_mat[i * d + j] = 0.5 * aij;
      }
    report.min_eigen_a =
        std::min(report.min_eigen_a, symmetric_min_eigenvalue(a_mat, d));

    // Two-point Lipschitz checks.
    const Vec y = random_point(box, gen);
    const Vec w = random_point(model.control_box, gen);
    Vec by(d), sigy(sig.size());
    model.drift(y, w, by);
    model.sigma(y, sigy);
    const double dxy2 = euclid_dist2(x, y);
    const double duw2 = euclid_dist2(u, w);
    const double db = frobenius_diff(b, by);
    const double ds = frobenius_diff(sig, sigy);
    report.worst_lipschitz_excess = std::max(
        report.worst_lipschitz_excess,
        db - model.lipschitz_b * std::sqrt(dxy2 + duw2) - slack);
    report.worst_lipschitz_excess =
        std::max(report.worst_lipschitz_excess,
                 ds - model.lipschitz_sigma * std::sqrt(dxy2) - slack);
    const double dc = std::abs(model.running_cost(x, u) - model.running_cost(y, u));
    report.worst_lipschitz_excess =
        std::max(report.worst_lipschitz_excess,
                 dc - model.lipschitz_c * std::sqrt(dxy2) - slack);
  }

  if (report.worst_bound_excess > slack) {
    report.pass = false;
    report.detail += "declared bound exceeded by " +
                     std::to_string(report.worst_bound_excess) + "; ";
  }
  if (report.worst_lipschitz_excess > slack) {
    report.pass = false;
    report.detail += "Lipschitz constant exceeded by " +
                     std::to_string(report.worst_lipschitz_excess) + "; ";
  }
  if (report.min_eigen_a < model.nondegeneracy_floor - slack) {
    report.pass = false;
    report.detail += "diffusion matrix eigenvalue " +
                     std::to_string(report.min_eigen_a) + " below declared floor; ";
  }
  return report;
}

}  // namespace diffmdp
