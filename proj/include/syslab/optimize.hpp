#pragma once

#include <cstdint>
#include <vector>

#include "syslab/cones.hpp"
#include "syslab/curves.hpp"
#include "syslab/errors.hpp"
#include "syslab/lengths.hpp"
#include "syslab/surface.hpp"
#include "syslab/types.hpp"

// Convex minimization of weighted length functions over the coordinate box,
// constrained minima on equal-length loci, and first-order classification of
// points and loci through the certificate engine.

namespace syslab {

// Search box in (cuff lengths | twists).  Descent never leaves it; an
// iterate pinned to a face with no feasible decrease signals divergence,
// which only non-filling curve sets can produce.
inline constexpr double kBoxLengthLo = 0.1;
inline constexpr double kBoxLengthHi = 6.0;
inline constexpr double kBoxTwistLo = -6.0;
inline constexpr double kBoxTwistHi = 6.0;

inline constexpr double kGradTol = 1e-7;
inline constexpr double kConstraintTol = 1e-9;
inline constexpr int kMaxIterations = 10000;

// Equal-length locus: the set of points where the lengths of curves[i] and
// curves[0] differ by exactly offsets[i].  Offsets are normalized so the
// first entry is zero.
struct LocusSpec {
  std::vector<int> curves;
  VecX offsets;

  static LocusSpec zero_offsets(std::vector<int> curves);
};

struct MinimizeResult {
  FNPoint point;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

enum class PointKind { Regular, Boundary, Critical, Indeterminate };

const char* to_string(PointKind k);

struct CriticalReport {
  PointKind kind = PointKind::Indeterminate;
  std::vector<int> systoles;
  RankIndex rank;
  int index = -1;  // rank - 1, critical points only
  ConeCertificate eutactic;        // verdict at the full systole set
  ConeCertificate full_cone;       // regular points: increase-cone witness
  std::vector<int> boundary_subset;  // boundary points: eutactic filling subset
  ConeCertificate boundary_eutactic;
};

enum class LocusClass { Inner, Outer, Borderline };

const char* to_string(LocusClass c);

struct LocusReport {
  LocusClass cls = LocusClass::Borderline;
  MinimizeResult minimum;
  ConeCertificate eutactic;       // inner witness at the constrained minimum
  ConeCertificate decrease_cone;  // outer witness: simultaneous decrease cone
};

struct ClassifyOptions {
  double systole_rel = 1e-7;  // tolerance identifying the systole set
  double resid_tol = 1e-6;    // eutacticity residual at located points
  double fd_step = kDefaultFdStep;
};

/// Quasi-Newton descent on x -> weighted length of the subset, clamped to
/// the search box.  Throws DivergedAsExpected when the iterate is pinned to
/// the box face with no feasible decrease (non-filling subsets end up here).
MinimizeResult minimize_weighted(const WeightVector& A, const CurveSystem& sys,
                                 const std::vector<int>& curves,
                                 const FNPoint& x0, double grad_tol = kGradTol,
                                 int max_iter = kMaxIterations);

/// minimize_weighted from `starts` deterministic seeded starting points;
/// returns the best value, ties broken lexicographically on coordinates.
MinimizeResult minimize_multistart(const WeightVector& A,
                                   const CurveSystem& sys,
                                   const std::vector<int>& curves,
                                   std::uint64_t seed, int starts = 8,
                                   double grad_tol = kGradTol,
                                   int max_iter = kMaxIterations);

/// Projected descent for the common length over the equal-length locus:
/// descent steps on the first curve's length alternate with Newton
/// projection back onto the offset constraints (residual <= kConstraintTol).
MinimizeResult restricted_minimize(const LocusSpec& spec, const CurveSystem& sys,
                                   const FNPoint& x0,
                                   double grad_tol = kGradTol,
                                   int max_iter = kMaxIterations);

/// First-order type of a point: critical when the systole set is eutactic
/// (index = gradient rank - 1), boundary when a proper filling subset of the
/// systole set is eutactic, regular otherwise (with an increase-cone
/// witness).  Indeterminate when an LP margin is inside the tolerance band.
CriticalReport classify_point(const CurveSystem& sys, const FNPoint& x,
                              const ClassifyOptions& opts = {});

/// Locus trichotomy at the constrained minimum: inner when the curve set is
/// eutactic there, outer when a simultaneous-decrease cone exists,
/// borderline otherwise.
LocusReport classify_locus(const LocusSpec& spec, const CurveSystem& sys,
                           const FNPoint& x0,
                           const ClassifyOptions& opts = {});

/// Descendent families of the systole set at a critical point.  Subsets come
/// back as catalog indices.  Throws NotCritical when classify_point does not
/// certify the point as critical.
struct DescendentReport {
  std::vector<int> systoles;
  SubsetFamilies families;
  CriticalReport at;
};

DescendentReport descendents_at(const CurveSystem& sys, const FNPoint& x,
                                const ClassifyOptions& opts = {});

/// The critical point with all six builtin catalog lengths equal: the
/// uniform-weight minimum over the full catalog, located by multi-start.
MinimizeResult schmutz_point(const CurveSystem& sys, std::uint64_t seed = 7);

}  // namespace syslab
