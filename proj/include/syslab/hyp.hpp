#pragma once

#include <complex>
#include <limits>
#include <optional>

#include "syslab/errors.hpp"
#include "syslab/types.hpp"

// Closed-form hyperbolic geometry in the upper half-plane model.  Boundary
// points live on the extended real line; the value kInf stands for the point
// at infinity.  Matrices act as Mobius transformations and are kept in SL(2)
// by renormalizing determinant drift.

namespace syslab {

using Cx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDetDriftTol = 1e-12;

inline bool is_infinite_point(double x) { return std::isinf(x); }

/// Determinant-renormalized product.  Keeps |det - 1| <= kDetDriftTol.
Mat2 sl2_mul(const Mat2& a, const Mat2& b);

/// Divide by sqrt(det) when drift exceeds the tolerance.
Mat2 sl2_normalize(const Mat2& m);

/// Adjugate inverse, exact for det = 1; no division.
inline Mat2 sl2_inverse(const Mat2& m) {
  Mat2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

/// Translation by hyperbolic distance d along the imaginary axis, upward.
Mat2 translation(double d);

/// Elliptic element fixing i that rotates tangent vectors at i by `angle`.
Mat2 rotation_about_i(double angle);

/// Translation length of a hyperbolic element from its trace.
/// Throws NonHyperbolicElement unless |t| > 2.
double trace_to_length(double t);

/// A right-angled hexagon, stored as its two alternating side triples.
/// opposite[i] faces alternate[i].
struct HexagonSides {
  Vec3 alternate;
  Vec3 opposite;
};

/// Solve a right-angled hexagon from one alternating triple via
///   cosh a' * sinh b * sinh c = cosh a + cosh b * cosh c
/// and its two cyclic rotations.  Throws InvalidSideLength unless all of
/// a, b, c are finite and strictly positive.
HexagonSides hexagon_solve(double a, double b, double c);

/// Identity residual of a candidate hexagon, max over the three relations.
double hexagon_residual(const HexagonSides& h);

/// Oriented geodesic with boundary endpoints p -> q.  For the axis of a
/// hyperbolic element, p is the repelling and q the attracting fixed point.
struct GeodesicAxis {
  double p = 0.0;
  double q = kInf;
};

/// Axis of a hyperbolic matrix.  Throws NonHyperbolicElement if |tr| <= 2.
GeodesicAxis axis(const Mat2& m);

/// Image of a boundary point under the Mobius action.
double mobius_boundary(const Mat2& m, double x);

/// Image of an interior point under the Mobius action.
Cx mobius_point(const Mat2& m, Cx z);

/// Image of an oriented geodesic under the Mobius action.
GeodesicAxis mobius_axis(const Mat2& m, const GeodesicAxis& ax);

/// Orientation-preserving map with p -> 0 and q -> infinity, det +1.
Mat2 map_to_standard(double p, double q);

/// Normalizing frame for an oriented axis: maps (p, q) to (0, inf) and a
/// marked point of the axis to i.
Mat2 axis_normalizer(const GeodesicAxis& ax, Cx marked);

/// Reflection across a geodesic line, as a det -1 matrix acting by
/// z -> mobius(M, conj(z)).  The product of two reflection matrices acts as
/// an ordinary Mobius transformation with matrix M2 * M1.
Mat2 reflection(const GeodesicAxis& line);

/// Crossing point of two geodesics in the open upper half-plane, if any.
std::optional<Cx> crossing_point(const GeodesicAxis& a, const GeodesicAxis& b);

/// Unit tangent of the oriented geodesic at a point z on it.
Vec2 axis_tangent_at(const GeodesicAxis& ax, Cx z);

/// Angle in (0, pi) between the directions of two crossing axes, measured
/// from a's direction to b's direction.  Returns nullopt when the axes are
/// disjoint in the interior (unlinked endpoints).  Throws TangentAtInfinity
/// when the axes share a boundary endpoint.
std::optional<double> crossing_angle(const GeodesicAxis& a, const GeodesicAxis& b);

/// cos of the counterclockwise angle in (0, pi) rotating the line spanned by
/// u onto the line spanned by v.  Invariant under sign flips of u and v.
double cos_line_angle(const Vec2& u, const Vec2& v);

/// Distance between interior points.
double hyperbolic_distance(Cx z, Cx w);

}  // namespace syslab
