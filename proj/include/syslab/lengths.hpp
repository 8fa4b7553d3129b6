#pragma once

#include <vector>

#include "syslab/curves.hpp"
#include "syslab/surface.hpp"
#include "syslab/types.hpp"

// Geodesic length functions of catalog curves over the coordinate space,
// the systole over the catalog, finite-difference gradients, and the
// twist-derivative cross-check against crossing angles.

namespace syslab {

struct WeightVector {
  VecX weights;  // one positive entry per curve of the subset it scales

  // Copy scaled to unit sum.
  WeightVector normalized() const;
};

struct GradientSet {
  FNPoint point;
  std::vector<int> curves;  // catalog indices, one per row
  MatX rows;                // coordinate partials, 6 columns
  double step = 0.0;
};

struct SystoleResult {
  double value = 0.0;
  std::vector<int> systoles;  // catalog indices within tolerance of the min
  double tol_rel = 0.0;
};

struct WolpertCheck {
  double fd = 0.0;        // finite-difference twist derivative
  double anglesum = 0.0;  // signed cosine of the crossing angle
};

inline constexpr double kDefaultFdStep = 1e-5;

// Translation length of the curve's holonomy: 2 arccosh(|trace| / 2).
// Throws NonHyperbolicElement when the trace is not hyperbolic.
double length(const CurveClass& c, const FNPoint& x);

// Sum of a_j * length(c_j) over the subset.  Weights must match the subset
// size and be positive; otherwise WeightMismatch.
double weighted_length(const WeightVector& A, const CurveSystem& sys,
                       const std::vector<int>& curves, const FNPoint& x);

// Minimum catalog length and all curves within relative tol_rel of it.
// tol_rel must lie in (0, 1e-3].
SystoleResult systole(const CurveSystem& sys, const FNPoint& x,
                      double tol_rel = 1e-7);

// Central differences of each curve's length over the 6 coordinates.
// Step h must lie in [1e-7, 1e-3].
GradientSet gradients(const CurveSystem& sys, const std::vector<int>& curves,
                      const FNPoint& x, double h = kDefaultFdStep);

// Twist derivative of length(c) along the given cuff (1..3) next to the
// signed cosine of the crossing angle, located on the cuff axis among
// conjugate lifts of c.  For a curve disjoint from the cuff the angle term
// is zero.  Throws AngleSearchFailed when no lift crosses within the
// searched conjugator depth.
WolpertCheck wolpert_check(const CurveSystem& sys, int curve, int cuff,
                           const FNPoint& x, double h = kDefaultFdStep);

// Crossing points of conjugate lifts of curve cj with the axis of curve ci,
// reduced modulo the deck translation along that axis.  Entries are
// deduplicated offsets in [0, length(ci)); the count equals the geometric
// intersection number when the conjugator depth suffices.
std::vector<double> crossing_positions(const CurveSystem& sys, int ci, int cj,
                                       const FNPoint& x, int depth = 5);

}  // namespace syslab
