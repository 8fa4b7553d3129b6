#pragma once

#include <array>
#include <string_view>

#include "syslab/errors.hpp"
#include "syslab/hyp.hpp"
#include "syslab/types.hpp"

// Genus-2 hyperbolic surfaces in Fenchel-Nielsen coordinates.  The fixed
// decomposition is the necklace scheme: two pairs of pants glued along all
// three cuffs.  Each pants is assembled from two copies of the right-angled
// hexagon with alternate sides (l1/2, l2/2, l3/2); gluing across cuff i is
// conjugated by a translation of distance tau_i along the cuff axis.

namespace syslab {

// A point of Teichmueller space: three cuff lengths (positive) and three
// twists, in length units along the cuff.
struct FNPoint {
  Vec3 cuff_lengths;
  Vec3 twists;

  Vec6 as_vector() const;
  static FNPoint from_vector(const Vec6& v);
};

// Tag for the gluing scheme.  Only the fixed genus-2 necklace is built;
// the constructor is private so no other scheme can be requested.
struct PantsDecomposition {
  static PantsDecomposition standard_genus2() { return {}; }

 private:
  PantsDecomposition() = default;
};

// Holonomy representation of the surface group on the four standard
// generators.  a1, a2 are the cuff-1 and cuff-2 holonomies; b1, b2 are the
// classes crossing cuff pairs {3,1} and {2,3}.  relator() is +-I and
// |tr cuff(i)| = 2 cosh(l_i / 2) for every valid input.
struct Holonomy {
  Mat2 a1, b1, a2, b2;

  // Product of space-separated letters, e.g. "a1 b1 A2"; an upper-case
  // first character denotes the inverse.  Throws CatalogFormatError on an
  // empty word or an unknown letter.
  Mat2 word(std::string_view w) const;

  // Holonomy of cuff i, i in {1, 2, 3}.
  Mat2 cuff(int i) const;

  // [a1,b1][a2,b2]; identity up to sign.
  Mat2 relator() const;
};

Holonomy build_holonomy(
    const FNPoint& x,
    const PantsDecomposition& d = PantsDecomposition::standard_genus2());

// Twist flow: increments tau_cuff by t, all other coordinates unchanged.
FNPoint twist(const FNPoint& x, int cuff, double t);

namespace detail {

// Frame walk around the hexagon (h1, s12, h2, s23, h3, s31), starting on
// the cuff-1 line (the imaginary axis) and turning by a right angle at each
// vertex.  frame[k] maps the standard frame at i to the start of side k+1;
// frame[6] closes up to +-identity.
struct PantsFrames {
  std::array<Mat2, 7> frame;
  Vec3 seams;  // (s23, s31, s12), seam k faces half-cuff k
};
PantsFrames pants_frames(const Vec3& half_lengths);

// Undecorated graph-of-groups letters for the necklace gluing: x1, x2 are
// cuff-1 and cuff-2 holonomies of the first pants, t1, t2 the edge letters
// through cuffs 1 and 2 (each returning through cuff 3).
struct NecklaceLetters {
  Mat2 x1, x2, t1, t2;
  // Exact frame sending the global cuff-i axis to the imaginary axis;
  // positive twist translates upward there.  Computed from the walk frames,
  // so it stays valid where fixed-point extraction is ill-conditioned.
  std::array<Mat2, 3> cuff_normalizer;
};
NecklaceLetters necklace_letters(const FNPoint& x);

}  // namespace detail

}  // namespace syslab
