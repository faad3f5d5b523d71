#include "diffmdp/measures.hpp"

#include <cmath>

namespace diffmdp {

double EmpiricalMeasure::integrate(const std::function<double(ConstView)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) s += weights[i] * f(support[i]);
  return s;
}

namespace {

void apply_transposed(const MarkovChainKernel& chain, ConstView mu, MutView out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < chain.rows.size(); ++i) {
    const double mass = mu[i];
    if (mass == 0.0) continue;
    for (const auto& e : chain.rows[i]) out[e.col] += mass * e.p;
  }
}

struct PowerIterationOutcome {
  Vec mu;
  double residual = 0.0;
  std::uint64_t iterations = 0;
};

PowerIterationOutcome power_iterate(const MarkovChainKernel& chain, Vec mu,
                                    double tol, std::uint64_t cap) {
  const std::size_t n = chain.rows.size();
  Vec next(n, 0.0);
  PowerIterationOutcome out;
  for (std::uint64_t k = 0; k < cap; ++k) {
    apply_transposed(chain, mu, next);
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(next[i] - mu[i]);
    mu.swap(next);
    ++out.iterations;
    out.residual = l1;
    if (l1 <= tol) {
      out.mu = std::move(mu);
      return out;
    }
  }
  throw NumericalError(
      "stationary distribution: power iteration did not converge after " +
      std::to_string(cap) + " iterations (residual " +
      std::to_string(out.residual) + "); the chain may be reducible");
}

}  // namespace

StationaryResult stationary_distribution(const MarkovChainKernel& chain, double tol,
                                         std::uint64_t iteration_cap) {
  if (tol <= 0.0) throw ConfigError("stationary distribution: tol must be positive");
  const std::size_t n = chain.rows.size();
  if (n == 0) throw ConfigError("stationary distribution: empty chain");

  Vec uniform(n, 1.0 / static_cast<double>(n));
  auto main_run = power_iterate(chain, uniform, tol, iteration_cap);

  // Second start (a normalized ramp) probes uniqueness.
  Vec ramp(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ramp[i] = static_cast<double>(i + 1);
    norm += ramp[i];
  }
  for (double& w : ramp) w /= norm;
  auto probe = power_iterate(chain, std::move(ramp), tol, iteration_cap);
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) l1 += std::abs(main_run.mu[i] - probe.mu[i]);

  StationaryResult result;
  result.unique_hint = l1 <= 16.0 * tol;
  result.residual = main_run.residual;
  result.iterations = main_run.iterations;
  result.measure.box = chain.grid.box();
  result.measure.provenance = MeasureProvenance::ChainStationary;
  result.measure.weights = std::move(main_run.mu);
  result.measure.support.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    result.measure.support.push_back(chain.grid.coordinate(i));
  return result;
}

StationaryResult stationary_distribution(const TransitionKernel& kernel,
                                         const Policy& policy, double tol,
                                         std::uint64_t iteration_cap) {
  return stationary_distribution(close_loop(kernel, policy.action), tol,
                                 iteration_cap);
}

std::function<Vec(ConstView)> grid_policy_feedback(const Grid& grid,
                                                   const ActionNet& actions,
                                                   const Policy& policy) {
  if (policy.size() != grid.size())
    throw ConfigError("grid policy feedback: policy length mismatch");
  // Copies keep the closure self-contained.
  return [grid, acts = actions.actions, pol = policy.action](ConstView x) {
    return acts[pol[grid.nearest(x)]];
  };
}

EmpiricalMeasure empirical_invariant_measure(
    const DiffusionModel& model, const std::function<Vec(ConstView)>& feedback,
    const Box& box, double horizon, double burn_in, double dt, double spacing,
    RandomSource rng) {
  if (dt <= 0.0 || spacing <= 0.0)
    throw ConfigError("empirical measure: dt and spacing must be positive");
  if (burn_in >= horizon)
    throw ConfigError("empirical measure: burn_in must be below the horizon");

  const int d = model.dim;
  const auto steps = static_cast<std::uint64_t>(std::floor(horizon / dt + 1e-9));
  const auto stride =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(spacing / dt)));

  GaussianStream noise(rng);
  Vec x = box.center();
  Vec b(d), sig(static_cast<std::size_t>(d) * d), z(d);
  const double sqdt = std::sqrt(dt);

  EmpiricalMeasure measure;
  measure.box = box;
  measure.provenance = MeasureProvenance::DiffusionLongrun;

  for (std::uint64_t k = 0; k < steps; ++k) {
    const Vec a = feedback(x);
    model.drift(x, a, b);
    model.sigma(x, sig);
    noise.fill(z);
    for (int i = 0; i < d; ++i) {
      double diffusion = 0.0;
      for (int j = 0; j < d; ++j) diffusion += sig[i * d + j] * z[j];
      x[i] += b[i] * dt + diffusion * sqdt;
    }
    for (double v : x)
      if (!std::isfinite(v))
        throw SimulationDiverged("empirical measure: trajectory diverged", k);
    const double t = static_cast<double>(k + 1) * dt;
    if (t >= burn_in && (k + 1) % stride == 0) measure.support.push_back(x);
  }
  if (measure.support.empty())
    throw ConfigError("empirical measure: no samples collected (horizon too short)");
  measure.weights.assign(measure.support.size(),
                         1.0 / static_cast<double>(measure.support.size()));
  return measure;
}

BLDictionary build_bl_dictionary(const Box& box, std::size_t count) {
  BLDictionary dict;
  dict.box = box;
  const std::size_t d = box.dim();
  if (count < d) throw ConfigError("BL dictionary: count below box dimension");

  // Scaled coordinate maps: Lip + sup = 1 exactly on the box.
  for (std::size_t i = 0; i < d; ++i) {
    const double c = box.axes[i].center();
    const double half = 0.5 * box.axes[i].width();
    const double scale = 1.0 / (1.0 + half);
    dict.functions.push_back(
        [i, c, scale](ConstView x) { return scale * (x[i] - c); });
  }

  // Products of tanh sigmoids centered on a deterministic lattice of
  // offsets, alternating between two slopes; ||f||_BL <= 1 by the scale
  // 1/(1 + |slopes|).
  const std::size_t remaining = count - d;
  const std::size_t per_dim = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(std::pow(static_cast<double>((remaining + 1) / 2),
                                1.0 / static_cast<double>(d)))));
  std::size_t emitted = 0;
  std::vector<std::size_t> lattice(d, 0);
  while (emitted < remaining) {
    Vec offset(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& ax = box.axes[i];
      offset[i] = ax.lo + ax.width() * (static_cast<double>(lattice[i]) + 0.5) /
                              static_cast<double>(per_dim);
    }
    const bool sharp = (emitted % 2) == 1;
    Vec slopes(d);
    double slope_norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      slopes[i] = (sharp ? 6.0 : 2.0) / box.axes[i].width();
      slope_norm2 += slopes[i] * slopes[i];
    }
    const double scale = 1.0 / (1.0 + std::sqrt(slope_norm2));
    dict.functions.push_back([offset, slopes, scale](ConstView x) {
      double f = scale;
      for (std::size_t i = 0; i < offset.size(); ++i)
        f *= std::tanh(slopes[i] * (x[i] - offset[i]));
      return f;
    });
    ++emitted;
    if (emitted % 2 == 0) {  // advance the lattice every two slopes
      for (std::size_t i = d; i-- > 0;) {
        if (++lattice[i] < per_dim) break;
        lattice[i] = 0;
      }
    }
  }
  return dict;
}

double bl_distance(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2,
                   const BLDictionary& dictionary) {
  if (mu1.box.dim() != mu2.box.dim())
    throw ConfigError("bl_distance: measures live on different dimensions");
  for (std::size_t i = 0; i < mu1.box.dim(); ++i) {
    if (std::abs(mu1.box.axes[i].lo - mu2.box.axes[i].lo) > 1e-9 ||
        std::abs(mu1.box.axes[i].hi - mu2.box.axes[i].hi) > 1e-9)
      throw ConfigError("bl_distance: measures live on different boxes");
  }
  double dist = 0.0;
  for (const auto& f : dictionary.functions)
    dist = std::max(dist, std::abs(mu1.integrate(f) - mu2.integrate(f)));
  return dist;
}

}  // namespace diffmdp
