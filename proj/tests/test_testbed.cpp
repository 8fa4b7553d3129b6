#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "syslab/cones.hpp"
#include "syslab/rng.hpp"
#include "syslab/testbed.hpp"

using namespace syslab;

TEST_CASE("values and gradients at the origin") {
  const Vec4 zero = Vec4::Zero();
  const Vec4 f = testbed_values(zero);
  for (int i = 0; i < 4; ++i) CHECK(f[i] == doctest::Approx(2.0).epsilon(1e-15));

  Mat4 expect;
  expect << 1, -1, 0, 0, 0, 1, -1, 0, 0, 0, -1, 1, 1, 0, 0, -1;
  CHECK((testbed_gradients(zero) - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(testbed_det(zero) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rank_and_index(testbed_gradients(zero)).rank == 3);
}

TEST_CASE("rank four off the degenerate plane") {
  Vec4 p;
  p << 0.0, 1.0, 0.0, 0.0;
  CHECK(testbed_det(p) ==
        doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-14));
  CHECK(rank_and_index(testbed_gradients(p)).rank == 4);
}

TEST_CASE("closed-form determinant matches the matrix determinant") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Vec4 x;
    for (int j = 0; j < 4; ++j) x[j] = rng.uniform(-2.0, 2.0);
    const double lhs = testbed_gradients(x).determinant();
    const double rhs = testbed_det(x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("all claims verified at 200 samples with seed 7") {
  const TestbedReport rep = testbed_verify(200, 7);
  CHECK(rep.samples == 200);
  CHECK(rep.on_plane == 100);
  CHECK(rep.rank_ok == 200);
  CHECK(rep.full_cone_ok == 200);
  CHECK(rep.mixed_ok == 200);
  CHECK(rep.claim_iv_ok == 100);
  CHECK(rep.fd_checked == 20);
  CHECK(rep.fd_ok == 20);
  CHECK(rep.all_ok);
}
