#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "syslab/cones.hpp"
#include "syslab/rng.hpp"
#include "syslab/simplex.hpp"

using namespace syslab;

namespace {

MatX rows_from(std::initializer_list<std::initializer_list<double>> data) {
  const int n = static_cast<int>(data.size());
  const int d = static_cast<int>(data.begin()->size());
  MatX m(n, d);
  int i = 0;
  for (const auto& row : data) {
    int j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

MatX random_rows(SplitMix64& rng, int n, int d) {
  MatX m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("lp solver basics") {
  LpProblem p;
  p.c = VecX(2);
  p.c << 1.0, 1.0;
  p.A_ub = rows_from({{1.0, 0.0}, {0.0, 1.0}});
  p.b_ub = VecX(2);
  p.b_ub << 2.0, 3.0;
  p.A_eq = MatX::Zero(0, 2);
  p.b_eq = VecX::Zero(0);
  auto r = solve_lp(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-12));

  // x >= 3 together with x <= 1 is infeasible.
  p.A_ub = rows_from({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}});
  p.b_ub = VecX(3);
  p.b_ub << 1.0, -3.0, 1.0;
  CHECK(solve_lp(p).status == LpResult::Status::Infeasible);

  // No constraints on y: unbounded.
  p.A_ub = rows_from({{1.0, 0.0}});
  p.b_ub = VecX::Ones(1);
  CHECK(solve_lp(p).status == LpResult::Status::Unbounded);

  // Equality-constrained: max x + y with x + y = 4, x <= 1.
  p.c << 1.0, 1.0;
  p.A_ub = rows_from({{1.0, 0.0}});
  p.b_ub = VecX::Ones(1);
  p.A_eq = rows_from({{1.0, 1.0}});
  p.b_eq = VecX(1);
  p.b_eq << 4.0;
  r = solve_lp(p);
  REQUIRE(r.status == LpResult::Status::Optimal);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("full cone on axis pairs") {
  auto cert = full_cone_exists(rows_from({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(cert.verdict == Verdict::True);
  CHECK(cert.direction.size() == 2);
  CHECK(cert.direction.minCoeff() > 0.0);
  CHECK(cert.verify(rows_from({{1.0, 0.0}, {0.0, 1.0}})));

  const MatX opposed = rows_from({{1.0, 0.0}, {-1.0, 0.0}});
  cert = full_cone_exists(opposed);
  CHECK(cert.verdict == Verdict::False);
  REQUIRE(cert.lambda.size() == 2);
  CHECK(cert.lambda[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cert.verify(opposed));

  CHECK_THROWS_AS(full_cone_exists(rows_from({{0.0, 0.0}, {1.0, 0.0}})),
                  DegenerateGradient);
}

TEST_CASE("mixed cone") {
  const MatX dup = rows_from({{1.0, 0.0}, {1.0, 0.0}});
  auto cert = mixed_cone_exists(dup, 0);
  CHECK(cert.verdict == Verdict::False);
  CHECK(cert.verify(dup));

  const MatX ortho = rows_from({{1.0, 0.0}, {0.0, 1.0}});
  cert = mixed_cone_exists(ortho, 1);
  CHECK(cert.verdict == Verdict::True);
  REQUIRE(cert.direction.size() == 2);
  CHECK(cert.direction[0] > 0.0);
  CHECK(cert.direction[1] < 0.0);
  CHECK(cert.verify(ortho));
}

TEST_CASE("eutactic frozen examples") {
  const MatX cross =
      rows_from({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}});
  auto cert = is_eutactic(cross);
  CHECK(cert.verdict == Verdict::True);
  REQUIRE(cert.lambda.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(cert.lambda[i] == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(cert.verify(cross));

  const MatX quarter = rows_from({{1.0, 0.0}, {0.0, 1.0}});
  cert = is_eutactic(quarter);
  CHECK(cert.verdict == Verdict::False);
  REQUIRE(cert.direction.size() == 2);
  CHECK((quarter * cert.direction).minCoeff() >= -1e-12);
  CHECK((quarter * cert.direction).sum() > 0.0);
  CHECK(cert.verify(quarter));
}

TEST_CASE("V-eutactic projections") {
  const MatX rows = rows_from({{1.0, 1.0}, {-1.0, 1.0}});
  MatX v_up(2, 1);
  v_up << 0.0, 1.0;
  auto cert = is_V_eutactic(rows, v_up);
  CHECK(cert.verdict == Verdict::False);
  CHECK(cert.verify(rows));

  MatX v_right(2, 1);
  v_right << 1.0, 0.0;
  cert = is_V_eutactic(rows, v_right);
  CHECK(cert.verdict == Verdict::True);
  CHECK(cert.verify(rows));

  CHECK_THROWS_AS(is_V_eutactic(rows, MatX::Zero(2, 1)), EmptySubspace);

  // Rows orthogonal to V cannot obstruct.
  const MatX flat = rows_from({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}});
  cert = is_V_eutactic(flat, v_right);
  CHECK(cert.verdict == Verdict::True);
  CHECK(cert.verify(flat));
}

TEST_CASE("balanced examples") {
  const MatX rows = rows_from({{1.0, 1.0}, {-1.0, 1.0}});
  MatX tangent(2, 1);
  tangent << 0.0, 1.0;
  auto cert = is_balanced(rows, tangent);
  CHECK(cert.verdict == Verdict::True);
  REQUIRE(cert.lambda.size() == 2);
  CHECK(cert.lambda[0] == doctest::Approx(0.5).epsilon(1e-8));
  REQUIRE(cert.direction.size() == 2);
  CHECK(std::abs(cert.direction[0]) < 1e-9);
  CHECK(cert.direction[1] > 0.1);
  CHECK(cert.verify(rows));

  const MatX colinear = rows_from({{1.0, 0.0}, {2.0, 0.0}});
  cert = is_balanced(colinear, tangent);
  CHECK(cert.verdict == Verdict::False);
}

TEST_CASE("rank and index") {
  auto ri = rank_and_index(rows_from({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}));
  CHECK(ri.rank == 2);
  CHECK(ri.index == 1);
  CHECK(ri.h_property);

  ri = rank_and_index(rows_from({{1.0, 0.0}, {2.0, 1e-12}, {0.0, 1.0}}));
  CHECK(ri.rank == 2);
  CHECK_FALSE(ri.h_property);
}

TEST_CASE("descendents of a simplex containing zero") {
  const double s = 1.0 / std::sqrt(3.0);
  const MatX rows = rows_from({{1.0, 0.0, 0.0},
                               {0.0, 1.0, 0.0},
                               {0.0, 0.0, 1.0},
                               {-s, -s, -s}});
  const auto fam = find_descendents(rows);
  REQUIRE(fam.descendents.size() == 1);
  CHECK(fam.descendents[0] == std::vector<int>({0, 1, 2, 3}));
  CHECK(fam.subdescendents.empty());
}

TEST_CASE("minimality separates descendents from subdescendents") {
  const double h = 1.0 / std::sqrt(2.0);
  const MatX rows = rows_from({{1.0, 0.0, 0.0},
                               {-1.0, 0.0, 0.0},
                               {0.0, 1.0, 0.0},
                               {0.0, 0.0, 1.0},
                               {0.0, -h, -h}});
  const auto fam = find_descendents(rows);
  // Both minimal eutactic subsets have rank below 3, so no descendents.
  CHECK(fam.descendents.empty());
  REQUIRE(fam.subdescendents.size() == 2);
  CHECK(fam.subdescendents[0] == std::vector<int>({0, 1}));
  CHECK(fam.subdescendents[1] == std::vector<int>({2, 3, 4}));
}

TEST_CASE("duality exclusivity on 500 random instances") {
  SplitMix64 rng(777);
  int definite = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 5);       // 2..6
    const int n = 1 + static_cast<int>(rng.next_u64() % 12);      // 1..12
    MatX rows = random_rows(rng, n, d);
    for (int i = 0; i < n; ++i)
      if (rows.row(i).norm() < 1e-3) rows(i, 0) += 1.0;

    const auto fc = full_cone_exists(rows);
    if (fc.verdict != Verdict::Indeterminate) {
      ++definite;
      CHECK((fc.verdict == Verdict::True) == (fc.direction.size() > 0));
      CHECK((fc.verdict == Verdict::False) == (fc.lambda.size() > 0));
      CHECK(fc.verify(rows));
    }

    const auto eu = is_eutactic(rows);
    if (eu.verdict != Verdict::Indeterminate) {
      CHECK((eu.verdict == Verdict::True) == (eu.lambda.size() > 0));
      CHECK((eu.verdict == Verdict::False) == (eu.direction.size() > 0));
      CHECK(eu.verify(rows));
    }
  }
  CHECK(definite >= 495);  // borderline random instances are vanishingly rare
}

TEST_CASE("eutactic verdict agrees with direction sampling in low dims") {
  SplitMix64 rng(2025);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 2);  // 2 or 3
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    MatX rows = random_rows(rng, n, d);
    for (int i = 0; i < n; ++i)
      if (rows.row(i).norm() < 1e-3) rows(i, 0) += 1.0;
    MatX unit = rows;
    for (int i = 0; i < n; ++i) unit.row(i).normalize();

    bool sampled_witness = false;
    for (int k = 0; k < 10000 && !sampled_witness; ++k) {
      VecX v(d);
      if (d == 2) {
        const double a = 2.0 * M_PI * k / 10000.0;
        v << std::cos(a), std::sin(a);
      } else {
        // Fibonacci sphere.
        const double z = 1.0 - 2.0 * (k + 0.5) / 10000.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = k * 2.399963229728653;
        v << r * std::cos(a), r * std::sin(a), z;
      }
      sampled_witness = ((unit * v).minCoeff() >= 1e-6);
    }

    const auto eu = is_eutactic(rows);
    if (sampled_witness) CHECK(eu.verdict == Verdict::False);
    if (eu.verdict == Verdict::True) CHECK_FALSE(sampled_witness);
  }
}

TEST_CASE("verdicts are invariant under positive row scaling") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 4);
    const int n = 2 + static_cast<int>(rng.next_u64() % 8);
    MatX rows = random_rows(rng, n, d);
    for (int i = 0; i < n; ++i)
      if (rows.row(i).norm() < 1e-3) rows(i, 0) += 1.0;
    MatX scaled = rows;
    const int which = static_cast<int>(rng.next_u64() % n);
    scaled.row(which) *= std::pow(10.0, rng.uniform(-3.0, 3.0));

    CHECK(full_cone_exists(rows).verdict == full_cone_exists(scaled).verdict);
    CHECK(is_eutactic(rows).verdict == is_eutactic(scaled).verdict);
    CHECK(mixed_cone_exists(rows, which).verdict ==
          mixed_cone_exists(scaled, which).verdict);
  }
}

TEST_CASE("dominant gap rank separates structure from trailing noise") {
  // Clean full-rank rows: no gap, full rank, agreeing with the cutoff rank.
  MatX id = MatX::Identity(3, 3);
  CHECK(dominant_gap_rank(id) == 3);
  CHECK(dominant_gap_rank(id) == rank_and_index(id).rank);

  // A dependent row polluted at the 1e-9 scale: the cutoff rank counts the
  // noise direction once it crosses 1e-8 * sigma_1, the gap rank does not.
  MatX rows(3, 3);
  rows << 1, 0, 0, 0, 1, 0, 1, 1, 3e-8;
  CHECK(dominant_gap_rank(rows) == 2);

  // An exactly dependent row: gap against a zero singular value.
  rows(2, 2) = 0.0;
  CHECK(dominant_gap_rank(rows) == 2);
  CHECK(dominant_gap_rank(rows) == rank_and_index(rows).rank);

  // Gentle conditioning (two decades) is not a gap.
  MatX cond(2, 2);
  cond << 1, 0, 1, 1e-2;
  CHECK(dominant_gap_rank(cond) == 2);

  SplitMix64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 4);
    const int n = d + static_cast<int>(rng.next_u64() % 3);
    const MatX g = random_rows(rng, n, d);
    CHECK(dominant_gap_rank(g) == rank_and_index(g).rank);
  }
}
