#include "syslab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace syslab {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kRelPivotTol = 1e-8;
constexpr int kMaxPivots = 20000;

// Ratio test over rows whose pivot element exceeds `eligible`.  Dividing a
// row by an element that is tiny relative to its column turns accumulated
// roundoff into O(1) garbage, so such entries must not pivot even when they
// win the plain minimal-ratio rule.  Rows skipped that way can drift a hair
// below feasibility, bounded by the threshold itself; negative right-hand
// sides are therefore clamped to zero in the ratio.  Near-tied ratios prefer
// the larger pivot element for stability, then the lower basic index for
// determinism.
int pick_leave(const MatX& T, const VecX& rhs, const std::vector<int>& basis,
               int enter, double eligible) {
  const int m = static_cast<int>(T.rows());
  int leave = -1;
  double best_ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    const double piv = T(i, enter);
    if (piv <= eligible) continue;
    const double ratio = std::max(rhs[i], 0.0) / piv;
    if (leave < 0 || ratio < best_ratio - kPivotTol) {
      leave = i;
      best_ratio = ratio;
      continue;
    }
    if (ratio >= best_ratio + kPivotTol) continue;
    const double held = T(leave, enter);
    if (piv > 2.0 * held || (piv > 0.5 * held && basis[i] < basis[leave])) {
      leave = i;
      if (ratio < best_ratio) best_ratio = ratio;
    }
  }
  return leave;
}

// Tableau simplex core, maximization, all variables >= 0.  `basis` holds the
// basic variable of each row; only columns below `enter_limit` may enter,
// which is how artificial columns are frozen out in phase 2.  Returns false
// when no finite optimum was reached (unbounded, or the pivot cap tripped).
bool run_simplex(MatX& T, VecX& rhs, std::vector<int>& basis, VecX& reduced,
                 int enter_limit) {
  const int m = static_cast<int>(T.rows());
  for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
    int enter = -1;
    for (int j = 0; j < enter_limit; ++j) {
      if (reduced[j] > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;

    const double colmax = T.col(enter).cwiseAbs().maxCoeff();
    int leave = pick_leave(T, rhs, basis, enter,
                           std::max(kPivotTol, kRelPivotTol * colmax));
    if (leave < 0) leave = pick_leave(T, rhs, basis, enter, kPivotTol);
    if (leave < 0) return false;

    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    reduced -= reduced[enter] * T.row(leave).transpose();
    basis[leave] = enter;
  }
  return false;
}

VecX reduced_costs(const MatX& T, const std::vector<int>& basis, const VecX& cost) {
  VecX red = cost;
  for (size_t i = 0; i < basis.size(); ++i) {
    const double cb = cost[basis[i]];
    if (cb != 0.0) red -= cb * T.row(static_cast<int>(i)).transpose();
  }
  for (int b : basis) red[b] = 0.0;
  return red;
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int n = static_cast<int>(p.c.size());
  const int m_ub = static_cast<int>(p.A_ub.rows());
  const int m_eq = static_cast<int>(p.A_eq.rows());
  const int m = m_ub + m_eq;

  // Columns: n positive parts, n negative parts, m_ub slacks, m artificials.
  const int off_neg = n;
  const int off_slack = 2 * n;
  const int off_art = 2 * n + m_ub;
  const int ncols = off_art + m;

  MatX T = MatX::Zero(m, ncols);
  VecX rhs(m);
  std::vector<int> basis(m, -1);

  for (int i = 0; i < m; ++i) {
    const bool is_ub = i < m_ub;
    VecX a = is_ub ? VecX(p.A_ub.row(i)) : VecX(p.A_eq.row(i - m_ub));
    double b = is_ub ? p.b_ub[i] : p.b_eq[i - m_ub];
    double slack_sign = 1.0;
    if (b < 0.0) {
      a = -a;
      b = -b;
      slack_sign = -1.0;
    }
    T.block(i, 0, 1, n) = a.transpose();
    T.block(i, off_neg, 1, n) = -a.transpose();
    if (is_ub) T(i, off_slack + i) = slack_sign;
    rhs[i] = b;
    if (is_ub && slack_sign > 0.0) {
      basis[i] = off_slack + i;
    } else {
      T(i, off_art + i) = 1.0;
      basis[i] = off_art + i;
    }
  }

  LpResult out;

  // Phase 1: maximize -sum(artificials); bounded by construction.
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i) need_phase1 = need_phase1 || basis[i] >= off_art;
  if (need_phase1) {
    VecX cost1 = VecX::Zero(ncols);
    for (int j = off_art; j < ncols; ++j) cost1[j] = -1.0;
    VecX red1 = reduced_costs(T, basis, cost1);
    run_simplex(T, rhs, basis, red1, ncols);
    double art_total = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= off_art) art_total += rhs[i];
    if (art_total > 1e-8) {
      out.status = LpResult::Status::Infeasible;
      return out;
    }
    // Pivot any lingering zero-value artificial out of the basis, choosing
    // the largest real coefficient so the pivot cannot amplify noise.  A row
    // whose real entries are all noise-scale is redundant and stays inert.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < off_art) continue;
      int enter = -1;
      double best = 1e-7;
      for (int j = 0; j < off_art; ++j) {
        if (std::abs(T(i, j)) > best) {
          best = std::abs(T(i, j));
          enter = j;
        }
      }
      if (enter < 0) continue;
      const double piv = T(i, enter);
      T.row(i) /= piv;
      rhs[i] /= piv;
      for (int k = 0; k < m; ++k) {
        if (k == i) continue;
        const double f = T(k, enter);
        if (f != 0.0) {
          T.row(k) -= f * T.row(i);
          rhs[k] -= f * rhs[i];
        }
      }
      basis[i] = enter;
    }
  }

  // Phase 2: real objective over the split variables; artificial columns are
  // excluded from entering via enter_limit.
  VecX cost2 = VecX::Zero(ncols);
  cost2.segment(0, n) = p.c;
  cost2.segment(off_neg, n) = -p.c;
  VecX red2 = reduced_costs(T, basis, cost2);
  if (!run_simplex(T, rhs, basis, red2, off_art)) {
    out.status = LpResult::Status::Unbounded;
    return out;
  }

  VecX full = VecX::Zero(ncols);
  for (int i = 0; i < m; ++i) full[basis[i]] = rhs[i];
  out.x = full.segment(0, n) - full.segment(off_neg, n);
  out.value = p.c.dot(out.x);
  out.status = LpResult::Status::Optimal;
  return out;
}

}  // namespace syslab
