#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diffmdp/rng.hpp"

using namespace diffmdp;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors of the original Random123 test suite.
  auto zeros = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zeros[0] == 0x6627e8d5u);
  CHECK(zeros[1] == 0xe169c58du);
  CHECK(zeros[2] == 0xbc57ac4cu);
  CHECK(zeros[3] == 0x9b00dbd8u);

  auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("identical sources give identical gaussian sequences") {
  GaussianStream a({42, 7});
  GaussianStream b({42, 7});
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("distinct streams differ") {
  GaussianStream a({42, 7});
  GaussianStream b({42, 8});
  int equal = 0;
  for (int i = 0; i < 256; ++i)
    if (a.next() == b.next()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniforms lie strictly inside (0,1)") {
  Philox4x32 gen({123, 0});
  for (int i = 0; i < 100000; ++i) {
    const double u = gen.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  GaussianStream g({2024, 0});
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = g.next();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("phase seeds separate stream families") {
  const auto a = phase_source(99, kPhaseKernel, 0);
  const auto b = phase_source(99, kPhaseDiscountedRollout, 0);
  const auto c = phase_source(99, kPhaseKernel, 1);
  CHECK(a.master_seed != b.master_seed);
  CHECK(a.master_seed != c.master_seed);
  CHECK(phase_source(99, kPhaseKernel, 0).master_seed == a.master_seed);
}
