#include "syslab/hyp.hpp"

#include <algorithm>
#include <cmath>

namespace syslab {

namespace {

bool near_equal_endpoint(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
  return a == b;
}

bool is_vertical(const GeodesicAxis& ax) {
  return std::isinf(ax.p) || std::isinf(ax.q);
}

}  // namespace

Mat2 sl2_normalize(const Mat2& m) {
  const double det = m.determinant();
  if (std::abs(det - 1.0) <= kDetDriftTol) return m;
  if (!(det > 0.0)) throw NonHyperbolicElement("determinant collapsed to a nonpositive value");
  return m / std::sqrt(det);
}

Mat2 sl2_mul(const Mat2& a, const Mat2& b) { return sl2_normalize(a * b); }

Mat2 translation(double d) {
  Mat2 t;
  t << std::exp(0.5 * d), 0.0, 0.0, std::exp(-0.5 * d);
  return t;
}

Mat2 rotation_about_i(double angle) {
  // R(alpha) = [[cos, -sin], [sin, cos]] rotates tangent vectors at i by
  // -2 alpha, so alpha = -angle / 2 gives a rotation by `angle`.
  const double alpha = -0.5 * angle;
  Mat2 r;
  r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  return r;
}

double trace_to_length(double t) {
  const double a = std::abs(t);
  if (!(a > 2.0)) throw NonHyperbolicElement("trace magnitude must exceed 2");
  return 2.0 * std::acosh(0.5 * a);
}

HexagonSides hexagon_solve(double a, double b, double c) {
  for (double s : {a, b, c}) {
    if (!std::isfinite(s) || !(s > 0.0))
      throw InvalidSideLength("hexagon sides must be finite and positive");
  }
  const double ca = std::cosh(a), cb = std::cosh(b), cc = std::cosh(c);
  const double sa = std::sinh(a), sb = std::sinh(b), sc = std::sinh(c);
  HexagonSides h;
  h.alternate << a, b, c;
  h.opposite << std::acosh((ca + cb * cc) / (sb * sc)),
      std::acosh((cb + cc * ca) / (sc * sa)),
      std::acosh((cc + ca * cb) / (sa * sb));
  return h;
}

double hexagon_residual(const HexagonSides& h) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = h.alternate[i];
    const double b = h.alternate[(i + 1) % 3];
    const double c = h.alternate[(i + 2) % 3];
    const double lhs = std::cosh(h.opposite[i]) * std::sinh(b) * std::sinh(c);
    const double rhs = std::cosh(a) + std::cosh(b) * std::cosh(c);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

GeodesicAxis axis(const Mat2& m) {
  const double t = m.trace();
  if (!(std::abs(t) > 2.0)) throw NonHyperbolicElement("axis requires |trace| > 2");
  const double disc = std::sqrt(t * t - 4.0);
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);

  GeodesicAxis ax;
  if (c == 0.0) {
    // Fixed points: infinity (eigenvalue a) and b / (d - a) (eigenvalue d).
    const double finite = b / (d - a);
    if (std::abs(a) > 1.0) {
      ax.p = finite;
      ax.q = kInf;
    } else {
      ax.p = kInf;
      ax.q = finite;
    }
    return ax;
  }

  // Roots of c x^2 + (d - a) x - b = 0, with the cancellation-safe split:
  // x1 = qq / c, x2 = -b / qq.  A fixed point x has multiplier c x + d.
  // |qq| >= disc / 2 > 0, so both divisions are safe.
  const double dm = d - a;
  const double qq = -0.5 * (dm + std::copysign(disc, dm == 0.0 ? 1.0 : dm));
  const double x1 = qq / c;
  const double x2 = -b / qq;
  const double m1 = c * x1 + d;
  if (std::abs(m1) > 1.0) {
    ax.p = x2;
    ax.q = x1;
  } else {
    ax.p = x1;
    ax.q = x2;
  }
  return ax;
}

double mobius_boundary(const Mat2& m, double x) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (std::isinf(x)) {
    if (c == 0.0) return kInf;
    return a / c;
  }
  const double den = c * x + d;
  if (den == 0.0) return kInf;
  return (a * x + b) / den;
}

Cx mobius_point(const Mat2& m, Cx z) {
  const Cx num = m(0, 0) * z + m(0, 1);
  const Cx den = m(1, 0) * z + m(1, 1);
  return num / den;
}

GeodesicAxis mobius_axis(const Mat2& m, const GeodesicAxis& ax) {
  return GeodesicAxis{mobius_boundary(m, ax.p), mobius_boundary(m, ax.q)};
}

Mat2 map_to_standard(double p, double q) {
  if (near_equal_endpoint(p, q))
    throw NonHyperbolicElement("degenerate axis: coincident endpoints");
  Mat2 n;
  if (std::isinf(p)) {
    // z -> -1/(z - q): sends q -> inf, inf -> 0, orientation-preserving.
    n << 0.0, -1.0, 1.0, -q;
    return n;
  }
  if (std::isinf(q)) {
    // z -> z - p.
    n << 1.0, -p, 0.0, 1.0;
    return n;
  }
  // Finite endpoints: z -> (z - p) / (s (z - q)) with s = sign(p - q), the
  // choice that keeps the determinant s (p - q) positive.  Entries are built
  // as products of one scale factor so that the numerator cancels exactly at
  // p and the denominator cancels exactly at q.
  const double k = 1.0 / std::sqrt(std::abs(q - p));
  if (q > p) {
    n << k, -(k * p), -k, k * q;
  } else {
    n << k, -(k * p), k, -(k * q);
  }
  return n;
}

Mat2 axis_normalizer(const GeodesicAxis& ax, Cx marked) {
  Mat2 n = map_to_standard(ax.p, ax.q);
  const double y0 = mobius_point(n, marked).imag();
  if (!(y0 > 0.0)) throw NonHyperbolicElement("marked point not in the upper half-plane");
  return sl2_normalize(translation(-std::log(y0)) * n);
}

Mat2 reflection(const GeodesicAxis& line) {
  Mat2 r;
  if (is_vertical(line)) {
    const double v = std::isinf(line.p) ? line.q : line.p;
    r << -1.0, 2.0 * v, 0.0, 1.0;
    return r;
  }
  const double center = 0.5 * (line.p + line.q);
  const double radius = 0.5 * std::abs(line.q - line.p);
  r << center, radius * radius - center * center, 1.0, -center;
  r /= radius;
  return r;
}

std::optional<Cx> crossing_point(const GeodesicAxis& a, const GeodesicAxis& b) {
  const bool va = is_vertical(a), vb = is_vertical(b);
  if (va && vb) return std::nullopt;
  if (va || vb) {
    const GeodesicAxis& vert = va ? a : b;
    const GeodesicAxis& circ = va ? b : a;
    const double x = std::isinf(vert.p) ? vert.q : vert.p;
    const double c = 0.5 * (circ.p + circ.q);
    const double r = 0.5 * std::abs(circ.q - circ.p);
    const double y2 = r * r - (x - c) * (x - c);
    if (y2 <= 0.0) return std::nullopt;
    return Cx(x, std::sqrt(y2));
  }
  const double c1 = 0.5 * (a.p + a.q), r1 = 0.5 * std::abs(a.q - a.p);
  const double c2 = 0.5 * (b.p + b.q), r2 = 0.5 * std::abs(b.q - b.p);
  if (c1 == c2) return std::nullopt;
  const double x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
  const double y2 = r1 * r1 - (x - c1) * (x - c1);
  if (y2 <= 0.0) return std::nullopt;
  return Cx(x, std::sqrt(y2));
}

Vec2 axis_tangent_at(const GeodesicAxis& ax, Cx z) {
  Vec2 t;
  if (is_vertical(ax)) {
    t << 0.0, std::isinf(ax.q) ? 1.0 : -1.0;
    return t;
  }
  const double c = 0.5 * (ax.p + ax.q);
  const double theta = std::atan2(z.imag(), z.real() - c);
  t << std::sin(theta), -std::cos(theta);
  if (ax.q < ax.p) t = -t;
  return t;
}

std::optional<double> crossing_angle(const GeodesicAxis& a, const GeodesicAxis& b) {
  if (near_equal_endpoint(a.p, b.p) || near_equal_endpoint(a.p, b.q) ||
      near_equal_endpoint(a.q, b.p) || near_equal_endpoint(a.q, b.q))
    throw TangentAtInfinity("axes share a boundary endpoint");
  const auto z = crossing_point(a, b);
  if (!z) return std::nullopt;
  const Vec2 u = axis_tangent_at(a, *z);
  const Vec2 v = axis_tangent_at(b, *z);
  const double cross = u[0] * v[1] - u[1] * v[0];
  const double dot = u.dot(v);
  return std::atan2(std::abs(cross), dot);
}

double cos_line_angle(const Vec2& u, const Vec2& v) {
  const double cross = u[0] * v[1] - u[1] * v[0];
  const double dot = u.dot(v);
  double phi = std::atan2(cross, dot);  // (-pi, pi]
  if (phi < 0.0) phi += M_PI;           // line angle in [0, pi)
  return std::cos(phi);
}

double hyperbolic_distance(Cx z, Cx w) {
  const double dz = std::norm(z - w);
  return std::acosh(1.0 + dz / (2.0 * z.imag() * w.imag()));
}

}  // namespace syslab
