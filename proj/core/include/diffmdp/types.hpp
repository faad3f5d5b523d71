#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffmdp {

using Vec = std::vector<double>;
using ConstView = std::span<const double>;
using MutView = std::span<double>;

/// Thrown for malformed configuration, bad file references, shape
/// mismatches and violated call preconditions. The CLI maps this to
/// exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical procedure fails (divergence, non-convergence,
/// invalid distribution). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A simulated state left the representable range. Carries the step at
/// which the first non-finite component appeared.
class SimulationDiverged : public NumericalError {
public:
  SimulationDiverged(const std::string& what, std::size_t step)
      : NumericalError(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clip(double x) const { return std::min(hi, std::max(lo, x)); }
};

/// Axis-aligned box in R^d.
struct Box {
  std::vector<Interval> axes;

  Box() = default;
  explicit Box(std::vector<Interval> a) : axes(std::move(a)) {}

  std::size_t dim() const { return axes.size(); }

  bool contains(ConstView x) const {
    if (x.size() != axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i)
      if (!axes[i].contains(x[i])) return false;
    return true;
  }

  void clip(MutView x) const {
    for (std::size_t i = 0; i < axes.size(); ++i) x[i] = axes[i].clip(x[i]);
  }

  Vec center() const {
    Vec c(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) c[i] = axes[i].center();
    return c;
  }

  /// True for a single point (all axes degenerate).
  bool degenerate() const {
    for (const auto& a : axes)
      if (a.width() > 0.0) return false;
    return true;
  }
};

inline Box make_box(std::initializer_list<Interval> axes) {
  return Box(std::vector<Interval>(axes));
}

inline double sup_norm(ConstView v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double euclid_dist2(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace diffmdp
