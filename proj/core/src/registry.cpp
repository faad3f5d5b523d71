#include "diffmdp/registry.hpp"

#include <cmath>

namespace diffmdp {

namespace {

ScalarField cosh_certificate_field() {
  ScalarField f;
  f.value = [](ConstView x) { return std::cosh(0.5 * x[0]); };
  f.gradient = [](ConstView x, MutView g) { g[0] = 0.5 * std::sinh(0.5 * x[0]); };
  f.hessian = [](ConstView x, MutView h) { h[0] = 0.25 * std::cosh(0.5 * x[0]); };
  return f;
}

BenchmarkModel make_bounded_ou(bool controlled) {
  BenchmarkModel bench;
  bench.id = controlled ? "bounded_ou" : "uncontrolled_1d";
  DiffusionModel& m = bench.model;
  m.dim = 1;
  m.control_dim = 1;
  m.drift = [](ConstView x, ConstView a, MutView out) {
    out[0] = -std::tanh(2.0 * x[0]) + a[0];
  };
  m.sigma = [](ConstView, MutView out) { out[0] = 0.5; };
  m.running_cost = [](ConstView x, ConstView a) {
    const double x2 = x[0] * x[0];
    return x2 / (1.0 + x2) + 0.1 * a[0] * a[0];
  };
  if (controlled) {
    m.control_box = make_box({{-0.5, 0.5}});
    m.bound_b = 1.5;
    m.bound_c = 1.025;
    m.lipschitz_b = std::sqrt(5.0);  // |db/dx| <= 2 jointly with |da| <= 1
  } else {
    m.control_box = make_box({{0.0, 0.0}});
    m.bound_b = 1.0;
    m.bound_c = 1.0;
    m.lipschitz_b = 2.0;
  }
  m.bound_sigma = 0.5;
  m.lipschitz_sigma = 0.0;
  m.lipschitz_c = 0.65;  // sup |d/dx x^2/(1+x^2)| = 3 sqrt(3) / 8
  m.nondegeneracy_floor = 0.125;

  bench.state_box = make_box({{-4.0, 4.0}});
  bench.x0 = {0.0};
  bench.sigma_min = 0.5;

  LyapunovCertificate cert;
  cert.V = cosh_certificate_field();
  cert.C0 = 0.25;  // validated numerically on the grid at registration scale
  cert.C1 = 0.15;
  cert.K = make_box({{-2.0, 2.0}});
  bench.certificate = cert;

  if (controlled) {
    bench.reference_policy = [](ConstView x) { return Vec{-0.5 * std::tanh(x[0])}; };
  } else {
    bench.reference_policy = [](ConstView) { return Vec{0.0}; };
  }
  return bench;
}

BenchmarkModel make_const_cost() {
  BenchmarkModel bench;
  bench.id = "const_cost";
  DiffusionModel& m = bench.model;
  m.dim = 1;
  m.control_dim = 1;
  m.drift = [](ConstView x, ConstView, MutView out) { out[0] = -std::tanh(x[0]); };
  m.sigma = [](ConstView, MutView out) { out[0] = 0.5; };
  m.running_cost = [](ConstView, ConstView) { return 1.0; };
  m.control_box = make_box({{0.0, 0.0}});
  m.bound_b = 1.0;
  m.bound_sigma = 0.5;
  m.bound_c = 1.0;
  m.lipschitz_b = 1.0;
  m.lipschitz_sigma = 0.0;
  m.lipschitz_c = 0.0;
  m.nondegeneracy_floor = 0.125;

  bench.state_box = make_box({{-3.0, 3.0}});
  bench.x0 = {0.0};
  bench.sigma_min = 0.5;
  bench.reference_policy = [](ConstView) { return Vec{0.0}; };
  return bench;
}

}  // namespace

BenchmarkModel make_benchmark(const std::string& id) {
  if (id == "const_cost") return make_const_cost();
  if (id == "bounded_ou") return make_bounded_ou(true);
  if (id == "uncontrolled_1d") return make_bounded_ou(false);
  throw ConfigError("unknown benchmark model '" + id + "'");
}

std::vector<std::string> benchmark_ids() {
  return {"const_cost", "bounded_ou", "uncontrolled_1d"};
}

}  // namespace diffmdp
