#include "syslab/lengths.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "syslab/hyp.hpp"

namespace syslab {
namespace {

// Sign making the finite-difference twist derivative match the cosine of
// the crossing angle under this construction's twist direction.
constexpr double kTwistAngleSign = 1.0;

constexpr int kConjugatorDepth = 6;

// A lift's axis crossing the imaginary axis: height of the crossing point
// and the cosine of the angle measured counterclockwise from the vertical.
struct ImagCrossing {
  double y0 = 0.0;
  double costheta = 0.0;
};

// Accepts any positive multiple of a hyperbolic matrix: the fixed-point
// quadratic c x^2 + (d - a) x - b = 0 is scale-invariant, so the search can
// run on raw products whose determinant drifts far from 1.
std::optional<ImagCrossing> imag_axis_crossing(const Mat2& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double scale =
      std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  if (!(scale > 0) || !std::isfinite(scale)) return std::nullopt;
  if (std::abs(c) <= 1e-14 * scale) return std::nullopt;  // vertical axis
  const double dm = d - a;
  const double disc = dm * dm + 4 * b * c;  // scale^2 (trace^2 - 4)
  if (!(disc > 1e-20 * scale * scale)) return std::nullopt;
  const double qq =
      -0.5 * (dm + std::copysign(std::sqrt(disc), dm == 0.0 ? 1.0 : dm));
  const double x1 = qq / c;
  const double x2 = -b / qq;
  if (!(x1 * x2 < 0.0)) return std::nullopt;
  const double y0 = std::sqrt(-x1 * x2);
  if (!(y0 > 1e-7) || !(y0 < 1e7)) return std::nullopt;

  // Tangent of the half-circle at (0, y0); the crossing angle is taken
  // counterclockwise from the vertical line, as an angle between lines.
  const double center = 0.5 * (x1 + x2);
  const double alpha = std::atan2(-center, -y0);
  double theta = std::fmod(alpha - std::numbers::pi / 2, std::numbers::pi);
  if (theta < 0) theta += std::numbers::pi;
  return ImagCrossing{y0, std::cos(theta)};
}

// Letters of the holonomy group conjugated into the frame where the
// reference axis is the imaginary axis, inverses adjacent to their letters.
std::array<Mat2, 8> normalized_letters(const Holonomy& h, const Mat2& frame) {
  const Mat2 inv = sl2_inverse(frame);
  auto conj = [&](const Mat2& g) {
    return Mat2(sl2_mul(sl2_mul(frame, g), inv));
  };
  const Mat2 base[4] = {h.a1, h.b1, h.a2, h.b2};
  std::array<Mat2, 8> out;
  for (int i = 0; i < 4; ++i) {
    out[2 * i] = conj(base[i]);
    out[2 * i + 1] = sl2_inverse(out[2 * i]);
  }
  return out;
}

// Breadth-first scan of g target g^-1 over reduced conjugator words g.
// Calls visit for every lift whose axis crosses the imaginary axis; stops
// early when visit returns true.  Conjugators are kept as raw projective
// matrices: entries are rescaled by their largest magnitude instead of the
// determinant, which is numerically meaningless for deep products.
void for_each_lift_crossing(
    const std::array<Mat2, 8>& letters, const Mat2& target, int max_depth,
    const std::function<bool(const ImagCrossing&)>& visit) {
  struct Node {
    Mat2 g;
    int last;
  };
  std::vector<Node> level{{Mat2::Identity(), -1}};
  for (int depth = 0; depth <= max_depth; ++depth) {
    for (const Node& n : level) {
      Mat2 adj;
      adj << n.g(1, 1), -n.g(0, 1), -n.g(1, 0), n.g(0, 0);
      const Mat2 m = n.g * target * adj;  // det(g) times the conjugate
      if (const auto hit = imag_axis_crossing(m))
        if (visit(*hit)) return;
    }
    if (depth == max_depth) break;
    std::vector<Node> next;
    next.reserve(level.size() * 7);
    for (const Node& n : level)
      for (int l = 0; l < 8; ++l) {
        if (n.last >= 0 && (l ^ 1) == n.last) continue;  // reduced words
        Mat2 child = n.g * letters[l];
        child /= child.cwiseAbs().maxCoeff();
        next.push_back({child, l});
      }
    level = std::move(next);
  }
}

int coordinate_of_twist(int cuff) { return 3 + (cuff - 1); }

double length_of_word(const Holonomy& h, const std::string& w) {
  return trace_to_length(h.word(w).trace());
}

// Frame sending the axis of curve `ci` to the imaginary axis: the exact
// walk frame for a cuff, a fixed-point normalizer otherwise.
Mat2 curve_axis_frame(const CurveSystem& sys, int ci, const FNPoint& x,
                      const Holonomy& h) {
  const std::string& w = sys.curves[ci].word;
  const detail::NecklaceLetters nl = detail::necklace_letters(x);
  if (w == "a1") return nl.cuff_normalizer[0];
  if (w == "a2") return nl.cuff_normalizer[1];
  if (w == "A2 A1") return nl.cuff_normalizer[2];
  const GeodesicAxis ax = axis(h.word(w));
  Cx marked;
  if (std::isinf(ax.p))
    marked = Cx(ax.q, 1.0);
  else if (std::isinf(ax.q))
    marked = Cx(ax.p, 1.0);
  else
    marked = Cx(0.5 * (ax.p + ax.q), 0.5 * std::abs(ax.q - ax.p));
  return axis_normalizer(ax, marked);
}

}  // namespace

WeightVector WeightVector::normalized() const {
  WeightVector out;
  const double s = weights.sum();
  if (!(s > 0)) throw WeightMismatch("weights must have positive sum");
  out.weights = weights / s;
  return out;
}

double length(const CurveClass& c, const FNPoint& x) {
  if (c.word.empty()) throw CatalogFormatError("curve word is empty");
  return length_of_word(build_holonomy(x), c.word);
}

double weighted_length(const WeightVector& A, const CurveSystem& sys,
                       const std::vector<int>& curves, const FNPoint& x) {
  if (A.weights.size() != static_cast<Eigen::Index>(curves.size()))
    throw WeightMismatch("weight count does not match curve subset");
  for (Eigen::Index i = 0; i < A.weights.size(); ++i)
    if (!(A.weights[i] > 0))
      throw WeightMismatch("weights must be positive");
  const Holonomy h = build_holonomy(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const int c = curves[i];
    if (c < 0 || c >= static_cast<int>(sys.curves.size()))
      throw Error("curve index out of range");
    sum += A.weights[static_cast<Eigen::Index>(i)] *
           length_of_word(h, sys.curves[c].word);
  }
  return sum;
}

SystoleResult systole(const CurveSystem& sys, const FNPoint& x,
                      double tol_rel) {
  if (!(tol_rel > 0) || !(tol_rel <= 1e-3))
    throw Error("systole tolerance must lie in (0, 1e-3]");
  if (sys.curves.empty()) throw EmptySystem("catalog has no curves");
  const Holonomy h = build_holonomy(x);
  std::vector<double> ls(sys.curves.size());
  for (std::size_t i = 0; i < sys.curves.size(); ++i)
    ls[i] = length_of_word(h, sys.curves[i].word);

  SystoleResult r;
  r.tol_rel = tol_rel;
  r.value = *std::min_element(ls.begin(), ls.end());
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] <= r.value * (1 + tol_rel)) r.systoles.push_back(static_cast<int>(i));
  return r;
}

GradientSet gradients(const CurveSystem& sys, const std::vector<int>& curves,
                      const FNPoint& x, double h) {
  if (!(h >= 1e-7) || !(h <= 1e-3))
    throw Error("finite-difference step must lie in [1e-7, 1e-3]");
  for (int c : curves)
    if (c < 0 || c >= static_cast<int>(sys.curves.size()))
      throw Error("curve index out of range");

  GradientSet g;
  g.point = x;
  g.curves = curves;
  g.step = h;
  g.rows.resize(static_cast<Eigen::Index>(curves.size()), 6);
  const Vec6 base = x.as_vector();
  for (int k = 0; k < 6; ++k) {
    Vec6 up = base, dn = base;
    up[k] += h;
    dn[k] -= h;
    const Holonomy hu = build_holonomy(FNPoint::from_vector(up));
    const Holonomy hd = build_holonomy(FNPoint::from_vector(dn));
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::string& w = sys.curves[curves[i]].word;
      g.rows(static_cast<Eigen::Index>(i), k) =
          (length_of_word(hu, w) - length_of_word(hd, w)) / (2 * h);
    }
  }
  return g;
}

WolpertCheck wolpert_check(const CurveSystem& sys, int curve, int cuff,
                           const FNPoint& x, double h) {
  if (cuff < 1 || cuff > 3) throw Error("cuff index must be 1, 2 or 3");
  if (curve < 0 || curve >= static_cast<int>(sys.curves.size()))
    throw Error("curve index out of range");

  const std::string& w = sys.curves[curve].word;
  WolpertCheck out;
  {
    const int k = coordinate_of_twist(cuff);
    Vec6 up = x.as_vector(), dn = up;
    up[k] += h;
    dn[k] -= h;
    out.fd = (length_of_word(build_holonomy(FNPoint::from_vector(up)), w) -
              length_of_word(build_holonomy(FNPoint::from_vector(dn)), w)) /
             (2 * h);
  }

  // Disjoint curves keep their length under the twist; no angle to find.
  static const char* kCuffWord[3] = {"a1", "a2", "A2 A1"};
  bool crosses = true;
  for (std::size_t i = 0; i < sys.curves.size(); ++i)
    if (sys.curves[i].word == kCuffWord[cuff - 1])
      crosses = static_cast<int>(i) != curve &&
                sys.intersections(static_cast<int>(i), curve) > 0;
  if (!crosses) return out;

  const Holonomy hol = build_holonomy(x);
  const detail::NecklaceLetters nl = detail::necklace_letters(x);
  const Mat2 frame = nl.cuff_normalizer[cuff - 1];
  const auto letters = normalized_letters(hol, frame);
  const Mat2 target =
      sl2_mul(sl2_mul(frame, hol.word(w)), sl2_inverse(frame));

  bool found = false;
  for_each_lift_crossing(letters, target, kConjugatorDepth,
                         [&](const ImagCrossing& hit) {
                           out.anglesum = kTwistAngleSign * hit.costheta;
                           found = true;
                           return true;
                         });
  if (!found)
    throw AngleSearchFailed("no lift of '" + sys.curves[curve].id +
                            "' crosses the cuff axis within the searched "
                            "conjugator depth");
  return out;
}

std::vector<double> crossing_positions(const CurveSystem& sys, int ci, int cj,
                                       const FNPoint& x, int depth) {
  if (ci < 0 || ci >= static_cast<int>(sys.curves.size()) || cj < 0 ||
      cj >= static_cast<int>(sys.curves.size()) || ci == cj)
    throw Error("need two distinct valid curve indices");

  const Holonomy hol = build_holonomy(x);
  const double li = length_of_word(hol, sys.curves[ci].word);
  const Mat2 frame = curve_axis_frame(sys, ci, x, hol);
  const auto letters = normalized_letters(hol, frame);
  const Mat2 target = sl2_mul(sl2_mul(frame, hol.word(sys.curves[cj].word)),
                              sl2_inverse(frame));

  // Crossing points reduced along the axis modulo the deck translation of
  // curve i; lifts of one geometric crossing land on one residue.
  std::vector<double> positions;
  for_each_lift_crossing(letters, target, depth,
                         [&](const ImagCrossing& hit) {
                           double pos = std::fmod(std::log(hit.y0), li);
                           if (pos < 0) pos += li;
                           positions.push_back(pos);
                           return false;
                         });
  // Distant lifts carry a little height roundoff, so the duplicate band is
  // generous; distinct crossings of low-intersection pairs sit far apart.
  std::sort(positions.begin(), positions.end());
  std::vector<double> distinct;
  for (double p : positions) {
    const bool dup =
        !distinct.empty() &&
        (p - distinct.back() < 1e-4 || (li - p) + distinct.front() < 1e-4);
    if (!dup) distinct.push_back(p);
  }
  return distinct;
}

}  // namespace syslab
