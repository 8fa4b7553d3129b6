#include "syslab/testbed.hpp"

#include <cmath>

#include "syslab/cones.hpp"
#include "syslab/rng.hpp"

namespace syslab {

Vec4 testbed_values(const Vec4& x) {
  Vec4 f;
  f << std::exp(x[0]) + std::exp(-x[1]), std::exp(x[1]) + std::exp(-x[2]),
      std::exp(-x[2]) + std::exp(x[3]), std::exp(-x[3]) + std::exp(x[0]);
  return f;
}

Mat4 testbed_gradients(const Vec4& x) {
  Mat4 g = Mat4::Zero();
  g(0, 0) = std::exp(x[0]);
  g(0, 1) = -std::exp(-x[1]);
  g(1, 1) = std::exp(x[1]);
  g(1, 2) = -std::exp(-x[2]);
  g(2, 2) = -std::exp(-x[2]);
  g(2, 3) = std::exp(x[3]);
  g(3, 0) = std::exp(x[0]);
  g(3, 3) = -std::exp(-x[3]);
  return g;
}

double testbed_det(const Vec4& x) {
  return std::exp(x[0]) * std::exp(-x[2]) *
         (std::exp(x[1]) * std::exp(-x[3]) - std::exp(-x[1]) * std::exp(x[3]));
}

namespace {

Mat4 fd_gradients(const Vec4& x, double h) {
  Mat4 g;
  for (int j = 0; j < 4; ++j) {
    Vec4 hi = x, lo = x;
    hi[j] += h;
    lo[j] -= h;
    g.col(j) = (testbed_values(hi) - testbed_values(lo)) / (2.0 * h);
  }
  return g;
}

// Null space of the first two gradient rows, as column basis.
MatX stationary_null_basis(const Mat4& g) {
  MatX top(2, 4);
  top.row(0) = g.row(0);
  top.row(1) = g.row(1);
  Eigen::FullPivLU<MatX> lu(top);
  lu.setThreshold(1e-10);
  return lu.kernel();
}

}  // namespace

TestbedReport testbed_verify(int samples, std::uint64_t seed) {
  TestbedReport rep;
  rep.samples = samples;
  rep.seed = seed;
  SplitMix64 rng(seed);

  for (int i = 0; i < samples; ++i) {
    Vec4 x;
    for (int j = 0; j < 4; ++j) x[j] = rng.uniform(-1.5, 1.5);
    const bool on_plane = (i % 2) == 1;
    if (on_plane) {
      x[3] = x[1];
      ++rep.on_plane;
    }

    const Mat4 g = testbed_gradients(x);

    const auto ri = rank_and_index(g);
    const double det = testbed_det(x);
    const int expected_rank = std::abs(x[1] - x[3]) <= 1e-8 ? 3 : 4;
    if (ri.rank == expected_rank && ((expected_rank == 4) == (std::abs(det) > 1e-10)))
      ++rep.rank_ok;

    const auto fc = full_cone_exists(g);
    if (fc.verdict == Verdict::True && fc.verify(g)) ++rep.full_cone_ok;

    bool mixed_all = true;
    for (int r = 0; r < 4; ++r) {
      const auto mc = mixed_cone_exists(g, r);
      mixed_all = mixed_all && mc.verdict == Verdict::True && mc.verify(g);
    }
    if (mixed_all) ++rep.mixed_ok;

    if (on_plane) {
      MatX pair(2, 4);
      pair.row(0) = g.row(2);
      pair.row(1) = g.row(3);
      const auto vc = is_V_eutactic(pair, stationary_null_basis(g));
      if (vc.verdict == Verdict::True && vc.verify(pair)) ++rep.claim_iv_ok;
    }

    if (i < 20) {
      ++rep.fd_checked;
      const Mat4 fd = fd_gradients(x, 1e-5);
      if ((fd - g).cwiseAbs().maxCoeff() <= 1e-6) ++rep.fd_ok;
    }
  }

  rep.all_ok = rep.rank_ok == rep.samples && rep.full_cone_ok == rep.samples &&
               rep.mixed_ok == rep.samples && rep.claim_iv_ok == rep.on_plane &&
               rep.fd_ok == rep.fd_checked;
  return rep;
}

}  // namespace syslab
