#pragma once

#include <vector>

#include "syslab/errors.hpp"
#include "syslab/types.hpp"

// First-order certificate engine.  Every query normalizes its gradient rows
// to unit 2-norm first, so verdicts are invariant under positive rescaling
// of individual rows.  Definite verdicts carry a re-checkable witness: a
// direction with positive margins on one side, barycentric coefficients on
// the other (Gordan / Stiemke alternatives).  Margins inside the tolerance
// band give Indeterminate instead of a forced verdict.

namespace syslab {

inline constexpr double kConeMargin = 1e-9;
inline constexpr double kBalanceFitTol = 1e-8;
inline constexpr double kRankTol = 1e-8;

struct ConeCertificate {
  enum class Kind { FullCone, MixedCone, Eutactic, VEutactic, Balanced };
  Kind kind = Kind::FullCone;
  Verdict verdict = Verdict::Indeterminate;
  VecX direction;  // direction witness (ambient coords); for Balanced, v_C
  VecX lambda;     // coefficient witness over the rows, sums to 1
  double margin = 0.0;
  int decrease_row = -1;   // MixedCone: the row required to decrease
  double tol = kConeMargin;  // residual / fit tolerance used by the query
  MatX basis;  // VEutactic: subspace basis; Balanced: tangent basis (columns)

  // Re-substitute the stored witness against `rows` (as handed to the
  // original query, not normalized).  Indeterminate verifies vacuously.
  bool verify(const MatX& rows) const;
};

/// Is there a direction with every row's evaluation >= margin?
ConeCertificate full_cone_exists(const MatX& rows);

/// As full_cone_exists, with row `decrease_row` required <= -margin.
ConeCertificate mixed_cone_exists(const MatX& rows, int decrease_row);

/// Is 0 a strictly positive combination of the rows?  resid_tol bounds the
/// acceptable 1-norm of the combination, absorbing gradient noise at
/// numerically located points; the strict default suits exact instances.
ConeCertificate is_eutactic(const MatX& rows, double resid_tol = kConeMargin);

/// Eutactic test of the rows projected into span(subspace columns).
/// Rows projecting to zero cannot obstruct and are assigned uniform weight.
ConeCertificate is_V_eutactic(const MatX& rows, const MatX& subspace,
                              double resid_tol = kConeMargin);

/// Does some strictly positive combination of the rows lie in the span of
/// the tangent basis columns (within fit_tol)?  Witness v_C = sum lambda_i g_i.
ConeCertificate is_balanced(const MatX& rows, const MatX& tangent,
                            double fit_tol = kBalanceFitTol);

struct RankIndex {
  int rank = 0;
  int index = -1;    // rank - 1
  bool h_property = false;  // rank equals the number of rows
};

RankIndex rank_and_index(const MatX& rows);

/// Numerical rank read off the widest multiplicative gap in the singular
/// spectrum of the unit-normalized rows; full rank when no gap exceeds
/// three decades.  Stable at numerically located points, where
/// finite-difference noise can straddle a fixed cutoff.
int dominant_gap_rank(const MatX& rows);

// Minimal eutactic subsets, split by whether they preserve the full span.
// Indices refer to row order.  Minimality is under inclusion among eutactic
// subsets, so no descendent contains a subdescendent or vice versa.
struct SubsetFamilies {
  std::vector<std::vector<int>> descendents;
  std::vector<std::vector<int>> subdescendents;
};

SubsetFamilies find_descendents(const MatX& rows, double resid_tol = kConeMargin);

}  // namespace syslab
