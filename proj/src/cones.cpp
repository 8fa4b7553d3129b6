#include "syslab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "syslab/simplex.hpp"

namespace syslab {

namespace {

constexpr double kZeroRowTol = 1e-12;
constexpr double kDropTol = 1e-10;
constexpr double kVerifySlack = 1e-9;

MatX unit_rows(const MatX& rows) {
  if (rows.rows() == 0) throw EmptySystem("certificate query needs at least one row");
  MatX out = rows;
  for (int i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n <= kZeroRowTol)
      throw DegenerateGradient("all-zero gradient row; upstream derivative failed");
    out.row(i) /= n;
  }
  return out;
}

MatX orthonormal_columns(const MatX& basis, const char* what) {
  if (basis.cols() == 0 || basis.rows() == 0) throw EmptySubspace(what);
  Eigen::ColPivHouseholderQR<MatX> qr(basis);
  qr.setThreshold(1e-10);
  const int k = static_cast<int>(qr.rank());
  if (k == 0) throw EmptySubspace(what);
  MatX q = qr.householderQ() * MatX::Identity(basis.rows(), k);
  return q;
}

// max t such that rows * v >= t, |v|_inf <= 1.  Returns (t*, v).
std::pair<double, VecX> best_margin_direction(const MatX& g) {
  const int n = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  LpProblem lp;
  lp.c = VecX::Zero(d + 1);
  lp.c[d] = 1.0;
  lp.A_ub = MatX::Zero(n + 2 * d, d + 1);
  lp.b_ub = VecX::Zero(n + 2 * d);
  for (int i = 0; i < n; ++i) {
    lp.A_ub.block(i, 0, 1, d) = -g.row(i);
    lp.A_ub(i, d) = 1.0;
  }
  for (int j = 0; j < d; ++j) {
    lp.A_ub(n + j, j) = 1.0;
    lp.b_ub[n + j] = 1.0;
    lp.A_ub(n + d + j, j) = -1.0;
    lp.b_ub[n + d + j] = 1.0;
  }
  lp.A_eq = MatX::Zero(0, d + 1);
  lp.b_eq = VecX::Zero(0);
  const LpResult res = solve_lp(lp);
  // Feasible (v = 0, t = 0) and bounded by construction.
  if (res.status != LpResult::Status::Optimal) return {-1.0, VecX::Zero(d)};
  return {res.value, res.x.segment(0, d)};
}

// min | g^T lambda |_1 over the probability simplex.  Returns (min, lambda).
std::pair<double, VecX> nearest_combination(const MatX& g) {
  const int n = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  LpProblem lp;
  lp.c = VecX::Zero(n + d);
  lp.c.segment(n, d).setConstant(-1.0);
  lp.A_ub = MatX::Zero(n + 2 * d, n + d);
  lp.b_ub = VecX::Zero(n + 2 * d);
  for (int i = 0; i < n; ++i) lp.A_ub(i, i) = -1.0;  // lambda_i >= 0
  for (int j = 0; j < d; ++j) {
    lp.A_ub.block(n + j, 0, 1, n) = g.col(j).transpose();
    lp.A_ub(n + j, n + j) = -1.0;
    lp.A_ub.block(n + d + j, 0, 1, n) = -g.col(j).transpose();
    lp.A_ub(n + d + j, n + j) = -1.0;
  }
  lp.A_eq = MatX::Zero(1, n + d);
  lp.A_eq.block(0, 0, 1, n).setOnes();
  lp.b_eq = VecX::Ones(1);
  const LpResult res = solve_lp(lp);
  if (res.status != LpResult::Status::Optimal)
    return {std::numeric_limits<double>::infinity(), VecX::Zero(n)};
  return {-res.value, res.x.segment(0, n)};
}

// max epsilon such that lambda in simplex, lambda_i >= epsilon, and the
// component of g^T lambda orthogonal to span(tangent) has l1 norm <= fit_tol
// (tangent may be empty, and must have orthonormal columns otherwise).  The
// orthogonal-projection residual is the exact quantity the verifier
// recomputes, so the optimizer and the checker can never disagree on it.
struct SimplexFit {
  bool feasible = false;
  double epsilon = 0.0;
  VecX lambda;
};

SimplexFit max_min_weight(const MatX& g, const MatX& tangent, double fit_tol) {
  const int n = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  MatX P = g.transpose();  // d x n, column i = row i of g
  if (tangent.cols() > 0) P -= tangent * (tangent.transpose() * P);
  // Variables: lambda (n), epsilon, z (d).
  const int nv = n + 1 + d;
  const int oe = n, oz = n + 1;
  LpProblem lp;
  lp.c = VecX::Zero(nv);
  lp.c[oe] = 1.0;
  lp.A_ub = MatX::Zero(n + 2 * d + 1, nv);
  lp.b_ub = VecX::Zero(n + 2 * d + 1);
  for (int i = 0; i < n; ++i) {
    lp.A_ub(i, i) = -1.0;
    lp.A_ub(i, oe) = 1.0;
  }
  for (int j = 0; j < d; ++j) {
    lp.A_ub.block(n + j, 0, 1, n) = P.row(j);
    lp.A_ub(n + j, oz + j) = -1.0;
    lp.A_ub.block(n + d + j, 0, 1, n) = -P.row(j);
    lp.A_ub(n + d + j, oz + j) = -1.0;
  }
  lp.A_ub.block(n + 2 * d, oz, 1, d).setOnes();
  lp.b_ub[n + 2 * d] = fit_tol;
  lp.A_eq = MatX::Zero(1, nv);
  lp.A_eq.block(0, 0, 1, n).setOnes();
  lp.b_eq = VecX::Ones(1);
  const LpResult res = solve_lp(lp);
  SimplexFit out;
  if (res.status != LpResult::Status::Optimal) return out;
  out.feasible = true;
  out.epsilon = res.value;
  out.lambda = res.x.segment(0, n);
  return out;
}

// Stiemke side: max t with rows * v >= 0 componentwise, sum(rows * v) >= t,
// |v|_inf <= 1.
std::pair<double, VecX> best_nonnegative_direction(const MatX& g) {
  const int n = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  LpProblem lp;
  lp.c = VecX::Zero(d + 1);
  lp.c[d] = 1.0;
  lp.A_ub = MatX::Zero(n + 1 + 2 * d, d + 1);
  lp.b_ub = VecX::Zero(n + 1 + 2 * d);
  for (int i = 0; i < n; ++i) lp.A_ub.block(i, 0, 1, d) = -g.row(i);
  lp.A_ub.block(n, 0, 1, d) = -g.colwise().sum();
  lp.A_ub(n, d) = 1.0;
  for (int j = 0; j < d; ++j) {
    lp.A_ub(n + 1 + j, j) = 1.0;
    lp.b_ub[n + 1 + j] = 1.0;
    lp.A_ub(n + 1 + d + j, j) = -1.0;
    lp.b_ub[n + 1 + d + j] = 1.0;
  }
  lp.A_eq = MatX::Zero(0, d + 1);
  lp.b_eq = VecX::Zero(0);
  const LpResult res = solve_lp(lp);
  if (res.status != LpResult::Status::Optimal) return {-1.0, VecX::Zero(d)};
  return {res.value, res.x.segment(0, d)};
}

// Witness re-checks.  The solver is numerically fallible, so no verdict is
// issued on its word alone: a witness that fails its own inequality is
// discarded and the decision falls through to the next certificate or to
// Indeterminate.  This makes a wrong True/False impossible, not merely
// unlikely.
bool weights_ok(const MatX& g, const VecX& lambda, double min_weight,
                double resid_tol) {
  return lambda.size() == g.rows() &&
         lambda.minCoeff() >= min_weight - kVerifySlack &&
         std::abs(lambda.sum() - 1.0) <= kVerifySlack &&
         (g.transpose() * lambda).lpNorm<1>() <= resid_tol + kVerifySlack;
}

bool direction_ok(const MatX& g, const VecX& v, double floor_each,
                  double floor_sum) {
  if (v.size() != g.cols() || v.lpNorm<Eigen::Infinity>() > 1.0 + kVerifySlack)
    return false;
  const VecX ev = g * v;
  return ev.minCoeff() >= floor_each - kVerifySlack &&
         ev.sum() >= floor_sum - kVerifySlack;
}

// Shared eutactic decision on prepared rows.
ConeCertificate eutactic_core(const MatX& g, double resid_tol,
                              ConeCertificate::Kind kind) {
  ConeCertificate cert;
  cert.kind = kind;
  cert.tol = resid_tol;
  const MatX no_tangent(g.cols(), 0);
  const SimplexFit fit = max_min_weight(g, no_tangent, resid_tol);
  if (fit.feasible && fit.epsilon >= kConeMargin &&
      weights_ok(g, fit.lambda, kConeMargin, resid_tol)) {
    cert.verdict = Verdict::True;
    cert.lambda = fit.lambda;
    cert.margin = fit.epsilon;
    return cert;
  }
  const auto [t, v] = best_nonnegative_direction(g);
  if (t >= kConeMargin && direction_ok(g, v, 0.0, t)) {
    cert.verdict = Verdict::False;
    cert.direction = v;
    cert.margin = t;
    return cert;
  }
  cert.verdict = Verdict::Indeterminate;
  return cert;
}

}  // namespace

ConeCertificate full_cone_exists(const MatX& rows) {
  const MatX g = unit_rows(rows);
  ConeCertificate cert;
  cert.kind = ConeCertificate::Kind::FullCone;
  const auto [t, v] = best_margin_direction(g);
  if (t >= kConeMargin && direction_ok(g, v, t, t)) {
    cert.verdict = Verdict::True;
    cert.direction = v;
    cert.margin = t;
    return cert;
  }
  const auto [dist, lambda] = nearest_combination(g);
  if (dist <= kConeMargin && weights_ok(g, lambda, 0.0, kConeMargin)) {
    cert.verdict = Verdict::False;
    cert.lambda = lambda;
    cert.margin = dist;
    return cert;
  }
  cert.verdict = Verdict::Indeterminate;
  return cert;
}

ConeCertificate mixed_cone_exists(const MatX& rows, int decrease_row) {
  if (decrease_row < 0 || decrease_row >= rows.rows())
    throw EmptySystem("decrease row out of range");
  MatX flipped = rows;
  flipped.row(decrease_row) *= -1.0;
  ConeCertificate cert = full_cone_exists(flipped);
  cert.kind = ConeCertificate::Kind::MixedCone;
  cert.decrease_row = decrease_row;
  return cert;
}

ConeCertificate is_eutactic(const MatX& rows, double resid_tol) {
  return eutactic_core(unit_rows(rows), resid_tol, ConeCertificate::Kind::Eutactic);
}

ConeCertificate is_V_eutactic(const MatX& rows, const MatX& subspace, double resid_tol) {
  const MatX g = unit_rows(rows);
  const MatX q = orthonormal_columns(subspace, "V-eutactic subspace is trivial");
  const int n = static_cast<int>(g.rows());
  const MatX proj = g * q;  // row i -> coordinates of the projection in V

  std::vector<int> kept;
  for (int i = 0; i < n; ++i)
    if (proj.row(i).norm() > kDropTol) kept.push_back(i);

  ConeCertificate cert;
  cert.kind = ConeCertificate::Kind::VEutactic;
  cert.tol = resid_tol;
  cert.basis = q;
  if (kept.empty()) {
    // Every direction of V annihilates every row: eutactic by definition.
    cert.verdict = Verdict::True;
    cert.lambda = VecX::Constant(n, 1.0 / n);
    cert.margin = 1.0 / n;
    return cert;
  }

  // Raw projections, not renormalized: verify() recomputes exactly this
  // matrix from the ambient rows and the stored basis.
  MatX sub(static_cast<int>(kept.size()), q.cols());
  for (size_t i = 0; i < kept.size(); ++i)
    sub.row(static_cast<int>(i)) = proj.row(kept[i]);
  ConeCertificate inner =
      eutactic_core(sub, resid_tol, ConeCertificate::Kind::VEutactic);
  cert.verdict = inner.verdict;
  if (inner.verdict == Verdict::True) {
    // Fold the dropped rows back in with uniform weight; they contribute
    // nothing to the combination, so the residual only shrinks.
    const double drop_share = static_cast<double>(n - kept.size()) / n;
    VecX lambda = VecX::Constant(n, 1.0 / n);
    for (size_t i = 0; i < kept.size(); ++i)
      lambda[kept[i]] = inner.lambda[static_cast<int>(i)] * (1.0 - drop_share);
    cert.lambda = lambda;
    cert.margin = lambda.minCoeff();
  } else if (inner.verdict == Verdict::False) {
    cert.direction = q * inner.direction;  // ambient direction inside V
    cert.margin = inner.margin;
  }
  return cert;
}

ConeCertificate is_balanced(const MatX& rows, const MatX& tangent, double fit_tol) {
  const MatX g = unit_rows(rows);
  const MatX q = orthonormal_columns(tangent, "balanced-locus tangent space is trivial");
  ConeCertificate cert;
  cert.kind = ConeCertificate::Kind::Balanced;
  cert.tol = fit_tol;
  cert.basis = q;
  const SimplexFit fit = max_min_weight(g, q, fit_tol);
  bool witness_ok = false;
  if (fit.feasible && fit.epsilon >= kConeMargin) {
    const VecX vc = g.transpose() * fit.lambda;
    const VecX resid = vc - q * (q.transpose() * vc);
    witness_ok = fit.lambda.minCoeff() >= kConeMargin - kVerifySlack &&
                 std::abs(fit.lambda.sum() - 1.0) <= kVerifySlack &&
                 resid.lpNorm<1>() <= fit_tol + kVerifySlack;
  }
  if (witness_ok) {
    cert.verdict = Verdict::True;
    cert.lambda = fit.lambda;
    cert.margin = fit.epsilon;
    cert.direction = g.transpose() * fit.lambda;
  } else if (!fit.feasible || fit.epsilon <= -kConeMargin) {
    cert.verdict = Verdict::False;
  } else {
    cert.verdict = Verdict::Indeterminate;
  }
  return cert;
}

RankIndex rank_and_index(const MatX& rows) {
  const MatX g = unit_rows(rows);
  Eigen::JacobiSVD<MatX> svd(g);
  const VecX sv = svd.singularValues();
  RankIndex out;
  const double cutoff = kRankTol * sv[0];
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++out.rank;
  out.index = out.rank - 1;
  out.h_property = out.rank == static_cast<int>(rows.rows());
  return out;
}

int dominant_gap_rank(const MatX& rows) {
  const MatX g = unit_rows(rows);
  Eigen::JacobiSVD<MatX> svd(g);
  const VecX sv = svd.singularValues();
  const int k = static_cast<int>(sv.size());
  if (k == 0 || sv[0] <= 0.0) return 0;
  int cut = k;
  double widest = 1e3;  // a gap under three decades does not separate
  for (int i = 0; i + 1 < k; ++i) {
    const double ratio = sv[i] / std::max(sv[i + 1], 1e-300);
    if (ratio > widest) {
      widest = ratio;
      cut = i + 1;
    }
  }
  return cut;
}

namespace {

// span(sub) contains every row of g, up to the finite-difference noise scale.
/// A residual comparison is stable where integer rank is not: at numerically
// located points the trailing singular values sit seven decades below the
// leading block, and a fixed rank cutoff lands inside the noise cluster.
constexpr double kSpanTol = 1e-4;

bool spans_all_rows(const MatX& sub, const MatX& g) {
  Eigen::CompleteOrthogonalDecomposition<MatX> cod(sub.transpose());
  for (int i = 0; i < g.rows(); ++i) {
    const VecX r = g.row(i).transpose();
    const VecX proj = sub.transpose() * cod.solve(r);
    if ((r - proj).norm() > kSpanTol * r.norm()) return false;
  }
  return true;
}

}  // namespace

SubsetFamilies find_descendents(const MatX& rows, double resid_tol) {
  const MatX g = unit_rows(rows);
  const int n = static_cast<int>(g.rows());
  if (n > 16) throw EmptySystem("descendent enumeration capped at 16 rows");

  std::vector<unsigned> masks;
  for (unsigned m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  SubsetFamilies out;
  std::vector<unsigned> accepted;
  for (unsigned m : masks) {
    bool superset = false;
    for (unsigned a : accepted) {
      if ((m & a) == a) {
        superset = true;
        break;
      }
    }
    if (superset) continue;

    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) idx.push_back(i);
    MatX sub(static_cast<int>(idx.size()), g.cols());
    for (size_t i = 0; i < idx.size(); ++i)
      sub.row(static_cast<int>(i)) = g.row(idx[i]);

    if (eutactic_core(sub, resid_tol, ConeCertificate::Kind::Eutactic).verdict !=
        Verdict::True)
      continue;
    accepted.push_back(m);
    if (spans_all_rows(sub, g)) {
      out.descendents.push_back(idx);
    } else {
      out.subdescendents.push_back(idx);
    }
  }
  return out;
}

bool ConeCertificate::verify(const MatX& rows) const {
  if (verdict == Verdict::Indeterminate) return true;
  MatX g = unit_rows(rows);
  switch (kind) {
    case Kind::FullCone:
    case Kind::MixedCone: {
      if (kind == Kind::MixedCone) {
        if (decrease_row < 0 || decrease_row >= g.rows()) return false;
        g.row(decrease_row) *= -1.0;
      }
      if (verdict == Verdict::True) {
        if (direction.size() != g.cols()) return false;
        if (direction.lpNorm<Eigen::Infinity>() > 1.0 + kVerifySlack) return false;
        return ((g * direction).array() >= margin - kVerifySlack).all() &&
               margin >= kConeMargin - kVerifySlack;
      }
      if (lambda.size() != g.rows()) return false;
      return lambda.minCoeff() >= -kVerifySlack &&
             std::abs(lambda.sum() - 1.0) <= kVerifySlack &&
             (g.transpose() * lambda).lpNorm<1>() <= kConeMargin + kVerifySlack;
    }
    case Kind::Eutactic:
    case Kind::VEutactic: {
      if (kind == Kind::VEutactic) {
        if (basis.rows() != g.cols()) return false;
        g = MatX(g * basis);  // work in subspace coordinates
      }
      if (verdict == Verdict::True) {
        if (lambda.size() != g.rows()) return false;
        return lambda.minCoeff() >= kConeMargin - kVerifySlack &&
               std::abs(lambda.sum() - 1.0) <= kVerifySlack &&
               (g.transpose() * lambda).lpNorm<1>() <= tol + kVerifySlack;
      }
      const VecX dir = kind == Kind::VEutactic
                           ? VecX(basis.transpose() * direction)
                           : direction;
      if (dir.size() != g.cols()) return false;
      const VecX ev = g * dir;
      return ev.minCoeff() >= -kVerifySlack && ev.sum() >= kConeMargin - kVerifySlack;
    }
    case Kind::Balanced: {
      if (verdict == Verdict::False) return true;  // no witness carried
      if (lambda.size() != g.rows() || basis.rows() != g.cols()) return false;
      const VecX vc = g.transpose() * lambda;
      const VecX resid = vc - basis * (basis.transpose() * vc);
      return lambda.minCoeff() >= kConeMargin - kVerifySlack &&
             std::abs(lambda.sum() - 1.0) <= kVerifySlack &&
             resid.lpNorm<1>() <= tol + kVerifySlack;
    }
  }
  return false;
}

}  // namespace syslab
