#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "syslab/cones.hpp"
#include "syslab/lengths.hpp"
#include "syslab/optimize.hpp"
#include "syslab/rng.hpp"

using namespace syslab;

namespace {

FNPoint symmetric_point() {
  const double s = 2.0 * std::acosh(2.0);
  FNPoint x;
  x.cuff_lengths << s, s, s;
  x.twists << 0, 0, 0;
  return x;
}

FNPoint random_point(SplitMix64& rng, double lmin, double lmax, double tmax) {
  FNPoint x;
  for (int i = 0; i < 3; ++i) x.cuff_lengths[i] = rng.uniform(lmin, lmax);
  for (int i = 0; i < 3; ++i) x.twists[i] = rng.uniform(-tmax, tmax);
  return x;
}

const std::vector<int> kAll{0, 1, 2, 3, 4, 5};
const std::vector<int> kQuad{0, 1, 2, 3};

WeightVector uniform_weights(int n) {
  WeightVector A;
  A.weights = VecX::Constant(n, 1.0 / n);
  return A;
}

double point_distance(const FNPoint& a, const FNPoint& b) {
  return (a.as_vector() - b.as_vector()).norm();
}

// The common-length value 2 arccosh 2 at the all-equal critical point.
const double kCriticalLength = 2.0 * std::acosh(2.0);

}  // namespace

TEST_CASE("uniform-weight minimum over the catalog hits the critical point") {
  const CurveSystem& sys = builtin_catalog();
  const MinimizeResult res = schmutz_point(sys);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(kCriticalLength).epsilon(1e-4));
  for (int i = 0; i < 6; ++i)
    CHECK(length(sys.curves[i], res.point) ==
          doctest::Approx(kCriticalLength).epsilon(1e-4));
  CHECK(point_distance(res.point, symmetric_point()) < 1e-4);
  CHECK(res.gradient_norm <= 1e-6);

  // the located point carries a healthy eutacticity certificate
  const GradientSet gs = gradients(sys, kAll, res.point, 1e-4);
  const ConeCertificate cert = is_eutactic(gs.rows, 1e-6);
  CHECK(cert.verdict == Verdict::True);
  CHECK(cert.margin > 0.1);
  CHECK(cert.verify(gs.rows));
}

TEST_CASE("minimization diverges on sets whose length has no lower bound") {
  const CurveSystem& sys = builtin_catalog();
  SplitMix64 rng(40);
  const FNPoint x0 = random_point(rng, 1.5, 3.0, 1.0);
  // single cuff: its length is a coordinate, free to shrink to the box face
  CHECK_THROWS_AS(minimize_weighted(uniform_weights(1), sys, {0}, x0),
                  DivergedAsExpected);
  // two disjoint cuffs fare no better
  CHECK_THROWS_AS(minimize_weighted(uniform_weights(2), sys, {0, 2}, x0),
                  DivergedAsExpected);
}

TEST_CASE("argmin is invariant under weight scaling and stable under nudges") {
  const CurveSystem& sys = builtin_catalog();
  WeightVector A = uniform_weights(4);
  const MinimizeResult base = minimize_multistart(A, sys, kQuad, 11, 4);
  CHECK(base.converged);

  WeightVector doubled;
  doubled.weights = 2.0 * A.weights;
  const MinimizeResult twice = minimize_multistart(doubled, sys, kQuad, 11, 4);
  CHECK(point_distance(base.point, twice.point) < 1e-6);
  CHECK(twice.value == doctest::Approx(2.0 * base.value).epsilon(1e-10));

  WeightVector nudged = A;
  nudged.weights[2] += 1e-4;
  const MinimizeResult moved = minimize_multistart(nudged, sys, kQuad, 11, 4);
  CHECK(point_distance(base.point, moved.point) < 1e-2);
}

TEST_CASE("converged minima are stationary and below their starting value") {
  const CurveSystem& sys = builtin_catalog();
  SplitMix64 rng(41);
  const WeightVector A = uniform_weights(4);
  for (int t = 0; t < 3; ++t) {
    const FNPoint x0 = random_point(rng, 1.0, 4.0, 2.0);
    const MinimizeResult res = minimize_weighted(A, sys, kQuad, x0);
    CHECK(res.converged);
    CHECK(res.value <= weighted_length(A, sys, kQuad, x0) + 1e-12);
    const GradientSet gs = gradients(sys, kQuad, res.point, 1e-4);
    CHECK((gs.rows.transpose() * A.weights).norm() <= 5e-6);
  }
}

TEST_CASE("weight vector must match the curve subset") {
  const CurveSystem& sys = builtin_catalog();
  SplitMix64 rng(42);
  const FNPoint x0 = random_point(rng, 1.5, 3.0, 1.0);
  CHECK_THROWS_AS(minimize_weighted(uniform_weights(3), sys, kQuad, x0),
                  WeightMismatch);
  CHECK_THROWS_AS(minimize_weighted(uniform_weights(4), sys, {}, x0),
                  EmptySystem);
}

TEST_CASE("constrained minimum on the six-curve equal-length locus") {
  const CurveSystem& sys = builtin_catalog();
  const LocusSpec spec = LocusSpec::zero_offsets(kAll);
  FNPoint s1, s2;
  s1.cuff_lengths << 1.5, 2.0, 3.5;
  s1.twists << 1.0, -1.0, 0.5;
  s2.cuff_lengths << 4.0, 3.0, 1.2;
  s2.twists << -2.0, 1.5, -0.5;

  const MinimizeResult r1 = restricted_minimize(spec, sys, s1);
  const MinimizeResult r2 = restricted_minimize(spec, sys, s2);
  CHECK(r1.converged);
  CHECK(r2.converged);
  CHECK(point_distance(r1.point, r2.point) < 1e-5);
  CHECK(r1.value == doctest::Approx(kCriticalLength).epsilon(1e-4));
  // all six lengths agree at the constrained minimum
  for (int i = 1; i < 6; ++i)
    CHECK(length(sys.curves[i], r1.point) ==
          doctest::Approx(length(sys.curves[0], r1.point)).epsilon(1e-8));
}

TEST_CASE("constrained minimum on the four-curve locus is start-independent") {
  const CurveSystem& sys = builtin_catalog();
  const LocusSpec spec = LocusSpec::zero_offsets(kQuad);
  FNPoint s1, s2;
  s1.cuff_lengths << 1.5, 2.0, 3.5;
  s1.twists << 1.0, -1.0, 0.5;
  s2.cuff_lengths << 4.0, 3.0, 1.2;
  s2.twists << -2.0, 1.5, -0.5;

  const MinimizeResult r1 = restricted_minimize(spec, sys, s1);
  const MinimizeResult r2 = restricted_minimize(spec, sys, s2);
  CHECK(r1.converged);
  CHECK(r2.converged);
  CHECK(point_distance(r1.point, r2.point) < 1e-5);
  for (int i = 1; i < 4; ++i)
    CHECK(length(sys.curves[i], r1.point) ==
          doctest::Approx(length(sys.curves[0], r1.point)).epsilon(1e-8));
}

TEST_CASE("locus descent diverges for non-filling pairs") {
  const CurveSystem& sys = builtin_catalog();
  FNPoint s1;
  s1.cuff_lengths << 1.5, 2.0, 3.5;
  s1.twists << 1.0, -1.0, 0.5;
  CHECK_THROWS_AS(
      restricted_minimize(LocusSpec::zero_offsets({0, 2}), sys, s1),
      DivergedAsExpected);
  CHECK_THROWS_AS(
      restricted_minimize(LocusSpec::zero_offsets({1, 5}), sys, s1),
      DivergedAsExpected);
}

TEST_CASE("common length is convex along projected chords of the locus") {
  const CurveSystem& sys = builtin_catalog();
  const LocusSpec spec = LocusSpec::zero_offsets(kQuad);
  SplitMix64 rng(61);
  const FNPoint a =
      restricted_minimize(spec, sys, random_point(rng, 1.0, 3.5, 1.5), 1e-7, 0)
          .point;
  const FNPoint b =
      restricted_minimize(spec, sys, random_point(rng, 1.0, 3.5, 1.5), 1e-7, 0)
          .point;
  std::vector<double> vals;
  for (int t = 0; t <= 10; ++t) {
    const double u = t / 10.0;
    const FNPoint mid =
        FNPoint::from_vector((1.0 - u) * a.as_vector() + u * b.as_vector());
    const FNPoint on = restricted_minimize(spec, sys, mid, 1e-7, 0).point;
    vals.push_back(length(sys.curves[0], on));
  }
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] >= -1e-7);
}

TEST_CASE("locus specifications are validated") {
  const CurveSystem& sys = builtin_catalog();
  FNPoint s1;
  s1.cuff_lengths << 2.0, 2.0, 2.0;
  s1.twists << 0, 0, 0;
  LocusSpec one;
  one.curves = {0};
  one.offsets = VecX::Zero(1);
  CHECK_THROWS_AS(restricted_minimize(one, sys, s1), Error);
  LocusSpec mismatched;
  mismatched.curves = {0, 1, 2};
  mismatched.offsets = VecX::Zero(2);
  CHECK_THROWS_AS(restricted_minimize(mismatched, sys, s1), Error);
}

TEST_CASE("the all-equal point classifies as critical") {
  const CurveSystem& sys = builtin_catalog();
  const CriticalReport at_exact = classify_point(sys, symmetric_point());
  CHECK(at_exact.kind == PointKind::Critical);
  CHECK(at_exact.systoles == kAll);
  CHECK(at_exact.rank.rank == 3);
  CHECK(at_exact.index == 2);
  CHECK(at_exact.eutactic.verdict == Verdict::True);
  CHECK(at_exact.eutactic.margin > 0.1);

  // located numerically, the systole identification needs the FD noise scale
  ClassifyOptions opts;
  opts.systole_rel = 1e-5;
  opts.fd_step = 1e-4;
  const FNPoint located = schmutz_point(sys).point;
  const CriticalReport at_located = classify_point(sys, located, opts);
  CHECK(at_located.kind == PointKind::Critical);
  CHECK(at_located.systoles == kAll);

  // localization error (~5e-7) lifts the zero twist derivatives to ~1e-7, so
  // the fixed-cutoff rank is noise there; the seven-decade spectral gap after
  // the third singular value is the stable statement
  const GradientSet gs = gradients(sys, kAll, located, 1e-4);
  MatX g = gs.rows;
  for (int i = 0; i < 6; ++i) g.row(i) /= g.row(i).norm();
  const VecX sv = Eigen::JacobiSVD<MatX>(g).singularValues();
  CHECK(sv[2] > 1.0);
  CHECK(sv[3] < 1e-6);
}

TEST_CASE("gradient rank at the critical point is step-size stable") {
  const CurveSystem& sys = builtin_catalog();
  const FNPoint x = symmetric_point();
  for (double h : {1e-4, 1e-5}) {
    const GradientSet gs = gradients(sys, kAll, x, h);
    CHECK(rank_and_index(gs.rows).rank == 3);
  }
}

TEST_CASE("generic points classify as regular with a verified witness") {
  const CurveSystem& sys = builtin_catalog();
  SplitMix64 rng(50);
  for (int t = 0; t < 5; ++t) {
    const FNPoint x = random_point(rng, 0.8, 4.0, 2.0);
    const CriticalReport rep = classify_point(sys, x);
    CHECK(rep.kind == PointKind::Regular);
    CHECK(rep.systoles.size() == 1);
    CHECK(rep.full_cone.verdict == Verdict::True);
  }

  // a point on the four-curve locus away from its minimum is still regular
  FNPoint s1;
  s1.cuff_lengths << 1.5, 2.0, 3.5;
  s1.twists << 1.0, -1.0, 0.5;
  const FNPoint on =
      restricted_minimize(LocusSpec::zero_offsets(kQuad), sys, s1, 1e-7, 0)
          .point;
  const CriticalReport rep = classify_point(sys, on);
  CHECK(rep.kind == PointKind::Regular);
  CHECK(rep.systoles.size() == 1);
}

TEST_CASE("locus trichotomy: inner at zero offsets, outer off them") {
  const CurveSystem& sys = builtin_catalog();
  FNPoint s1;
  s1.cuff_lengths << 1.5, 2.0, 3.5;
  s1.twists << 1.0, -1.0, 0.5;

  const LocusReport quad =
      classify_locus(LocusSpec::zero_offsets(kQuad), sys, s1);
  CHECK(quad.cls == LocusClass::Inner);
  CHECK(quad.minimum.converged);
  CHECK(quad.eutactic.verdict == Verdict::True);

  ClassifyOptions opts;
  opts.resid_tol = 1e-5;
  const LocusReport six =
      classify_locus(LocusSpec::zero_offsets(kAll), sys, s1, opts);
  CHECK(six.cls == LocusClass::Inner);
  CHECK(six.eutactic.verdict == Verdict::True);

  LocusSpec asym;
  asym.curves = kAll;
  asym.offsets = VecX(6);
  asym.offsets << 0.0, 0.3, -0.2, 0.4, 0.1, -0.3;
  const LocusReport off = classify_locus(asym, sys, s1);
  CHECK(off.cls == LocusClass::Outer);
  CHECK(off.minimum.converged);
  CHECK(off.decrease_cone.verdict == Verdict::True);
  CHECK(off.decrease_cone.margin > 0.05);

  CHECK_THROWS_AS(
      classify_locus(LocusSpec::zero_offsets({0, 2}), sys, s1), NotFilling);
}

TEST_CASE("descendent families at the critical point") {
  const CurveSystem& sys = builtin_catalog();
  const DescendentReport rep = descendents_at(sys, symmetric_point());
  CHECK(rep.systoles == kAll);
  CHECK(rep.families.subdescendents.empty());
  REQUIRE(rep.families.descendents.size() == 6);
  // exactly the six runs of four consecutive curves around the necklace
  std::vector<std::vector<int>> expected;
  for (int s = 0; s < 6; ++s) {
    std::vector<int> run;
    for (int k = 0; k < 4; ++k) run.push_back((s + k) % 6);
    std::sort(run.begin(), run.end());
    expected.push_back(run);
  }
  std::sort(expected.begin(), expected.end());
  std::vector<std::vector<int>> got = rep.families.descendents;
  for (auto& d : got) std::sort(d.begin(), d.end());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  for (const auto& d : rep.families.descendents) CHECK(d.size() == 4);

  // descendents are only defined at critical points
  SplitMix64 rng(51);
  CHECK_THROWS_AS(descendents_at(sys, random_point(rng, 0.8, 4.0, 2.0)),
                  NotCritical);
}

TEST_CASE("balanced certificates on the four-curve locus") {
  const CurveSystem& sys = builtin_catalog();
  const LocusSpec spec = LocusSpec::zero_offsets(kQuad);
  SplitMix64 rng(60);
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    const FNPoint x =
        restricted_minimize(spec, sys, random_point(rng, 1.0, 3.5, 1.5), 1e-7, 0)
            .point;
    const GradientSet gs = gradients(sys, kQuad, x, 1e-4);
    MatX J(3, 6);
    for (int i = 1; i < 4; ++i) J.row(i - 1) = gs.rows.row(i) - gs.rows.row(0);
    const MatX tangent = Eigen::FullPivLU<MatX>(J).kernel();
    const ConeCertificate cert = is_balanced(gs.rows, tangent, 1e-5);
    CHECK(cert.verdict == Verdict::True);
    CHECK(cert.margin > 1e-3);
    CHECK(cert.verify(gs.rows));
    ++checked;
  }
  CHECK(checked == 10);
}
