#include "syslab/surface.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace syslab {

Vec6 FNPoint::as_vector() const {
  Vec6 v;
  v << cuff_lengths, twists;
  return v;
}

FNPoint FNPoint::from_vector(const Vec6& v) {
  FNPoint x;
  x.cuff_lengths = v.head<3>();
  x.twists = v.tail<3>();
  return x;
}

namespace detail {

PantsFrames pants_frames(const Vec3& half_lengths) {
  const HexagonSides hex =
      hexagon_solve(half_lengths[0], half_lengths[1], half_lengths[2]);
  PantsFrames pf;
  pf.seams = hex.opposite;
  // Cyclic side order (h1, s12, h2, s23, h3, s31); opposite[k] is the seam
  // facing half-cuff k, so s12 = opposite[2] etc.
  const std::array<double, 6> sides = {half_lengths[0], hex.opposite[2],
                                       half_lengths[1], hex.opposite[0],
                                       half_lengths[2], hex.opposite[1]};
  // Turn sign fixed once; flipping it builds the mirror hexagon.
  const Mat2 turn = rotation_about_i(-std::numbers::pi / 2);
  pf.frame[0] = Mat2::Identity();
  for (int k = 0; k < 6; ++k)
    pf.frame[k + 1] = sl2_mul(sl2_mul(pf.frame[k], translation(sides[k])), turn);
  return pf;
}

NecklaceLetters necklace_letters(const FNPoint& x) {
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(x.twists[i]))
      throw InvalidSideLength("twist coordinates must be finite");
  const PantsFrames pf = pants_frames(x.cuff_lengths / 2);

  Mat2 mirror;
  mirror << -1, 0, 0, 1;
  auto reflect_in = [&](const Mat2& fr) {
    return Mat2(fr * mirror * sl2_inverse(fr));
  };
  // Reflections in the three seam lines; consecutive products translate
  // along the cuff the two seams share, by the full cuff length.
  const Mat2 b12 = reflect_in(pf.frame[1]);
  const Mat2 b23 = reflect_in(pf.frame[3]);
  const Mat2 b31 = reflect_in(pf.frame[5]);
  const Mat2 x1_pants = sl2_normalize(b31 * b12);
  const Mat2 x2_pants = sl2_normalize(b12 * b23);

  // Cuff normalizers: m_i moves the walk's cuff-i line to the imaginary
  // axis with the seam foot at i.  The glued copy is rotated across the
  // cuff by j (half turn about i) and slid by the twist.
  const Mat2 m1 = sl2_inverse(pf.frame[0]);
  const Mat2 m2 = sl2_inverse(pf.frame[2]);
  const Mat2 m3 = sl2_inverse(pf.frame[4]);
  Mat2 j;
  j << 0, -1, 1, 0;
  const Mat2 glue3_inv =
      sl2_inverse(sl2_mul(sl2_mul(translation(x.twists[2]), j), m3));
  auto edge_letter = [&](const Mat2& mi, double tau) {
    Mat2 w = sl2_mul(m3, sl2_inverse(mi));
    w = sl2_mul(w, translation(tau));
    w = sl2_mul(w, j);
    w = sl2_mul(w, mi);
    return sl2_mul(w, glue3_inv);
  };

  NecklaceLetters nl;
  nl.x1 = sl2_mul(sl2_mul(m3, x1_pants), sl2_inverse(m3));
  nl.x2 = sl2_mul(sl2_mul(m3, x2_pants), sl2_inverse(m3));
  nl.t1 = edge_letter(m1, x.twists[0]);
  nl.t2 = edge_letter(m2, x.twists[1]);
  // The global picture is the pants picture conjugated by m3, so the frame
  // taking the global cuff-i axis to the imaginary axis is m_i m3^-1.
  nl.cuff_normalizer[0] = sl2_mul(m1, pf.frame[4]);
  nl.cuff_normalizer[1] = sl2_mul(m2, pf.frame[4]);
  nl.cuff_normalizer[2] = sl2_mul(m3, pf.frame[4]);
  return nl;
}

}  // namespace detail

Holonomy build_holonomy(const FNPoint& x, const PantsDecomposition&) {
  const detail::NecklaceLetters nl = detail::necklace_letters(x);
  // This basis satisfies [a1,b1][a2,b2] = +I identically: the necklace
  // relation is t2^-1 x2 t2 t1^-1 x1 t1 = x1 x2, which regroups as
  // [x1, x2 t1^-1] [x2, t2^-1] = I.
  Holonomy h;
  h.a1 = nl.x1;
  h.b1 = sl2_mul(nl.x2, sl2_inverse(nl.t1));
  h.a2 = nl.x2;
  h.b2 = sl2_inverse(nl.t2);
  return h;
}

Mat2 Holonomy::word(std::string_view w) const {
  Mat2 prod = Mat2::Identity();
  bool any = false;
  std::size_t i = 0;
  while (i < w.size()) {
    while (i < w.size() && w[i] == ' ') ++i;
    if (i == w.size()) break;
    std::size_t j = i;
    while (j < w.size() && w[j] != ' ') ++j;
    const std::string_view tok = w.substr(i, j - i);
    i = j;
    const Mat2* g = nullptr;
    if (tok == "a1" || tok == "A1") g = &a1;
    else if (tok == "b1" || tok == "B1") g = &b1;
    else if (tok == "a2" || tok == "A2") g = &a2;
    else if (tok == "b2" || tok == "B2") g = &b2;
    else throw CatalogFormatError("unknown letter '" + std::string(tok) + "'");
    prod = sl2_mul(prod, tok[0] >= 'A' && tok[0] <= 'Z' ? sl2_inverse(*g) : *g);
    any = true;
  }
  if (!any) throw CatalogFormatError("empty holonomy word");
  return prod;
}

Mat2 Holonomy::cuff(int i) const {
  switch (i) {
    case 1: return a1;
    case 2: return a2;
    // Pants relation: cuff 3 is (a1 a2)^-1; its axis is the imaginary axis.
    case 3: return sl2_mul(sl2_inverse(a2), sl2_inverse(a1));
    default: throw Error("cuff index must be 1, 2, or 3");
  }
}

Mat2 Holonomy::relator() const { return word("a1 b1 A1 B1 a2 b2 A2 B2"); }

FNPoint twist(const FNPoint& x, int cuff, double t) {
  if (cuff < 1 || cuff > 3) throw Error("cuff index must be 1, 2, or 3");
  FNPoint out = x;
  out.twists[cuff - 1] += t;
  return out;
}

}  // namespace syslab
