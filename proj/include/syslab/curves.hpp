#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "syslab/errors.hpp"

// Curve catalog: free-homotopy classes as holonomy words, their pairwise
// geometric intersection numbers (all 0 or 1), and the rotation system at
// each crossing.  Filling is decided combinatorially by face tracing.

namespace syslab {

struct CurveClass {
  std::string id;
  std::string word;  // cyclically reduced, nonempty
  bool is_cuff = false;
};

// One strand end at a crossing: a curve leaving the crossing, either
// forward along its orientation or backward.
struct Strand {
  int curve = 0;
  bool forward = true;
};

// A transversal crossing of curves a and b with the counterclockwise order
// of the four strand ends around it.
struct Crossing {
  int a = 0, b = 0;
  std::array<Strand, 4> ccw;
};

struct CurveSystem {
  std::vector<CurveClass> curves;
  Eigen::MatrixXi intersections;  // symmetric 0/1, zero diagonal
  std::vector<Crossing> crossings;

  // Index of a curve id; throws CatalogFormatError if absent.
  int index_of(std::string_view id) const;
};

// Strict parser for the line-oriented catalog: sections [CURVES] (id = word),
// [INTERSECT] (id id) and [ROTATION] (id id: four strand ends), in that
// order; '#' starts a comment line.  Any deviation throws
// CatalogFormatError.
CurveSystem parse_catalog(std::string_view text);

// The shipped six-curve necklace catalog.
const CurveSystem& builtin_catalog();
const char* builtin_catalog_text();

struct FillingReport {
  int V = 0, E = 0, F = 0;
  int euler = 0;
  bool fills = false;
  bool minimal = false;
};

// Face-traces the subsystem induced on the given curves.  The union fills
// iff it is connected, every curve crosses some other, and V - E + F = -2.
// Throws EmptySystem for an empty subset, Error for bad indices.
FillingReport fills(const CurveSystem& sys, const std::vector<int>& subset);

// True iff subset fills and no proper nonempty subset fills.
// Throws NotFilling when subset does not fill.
bool minimal_filling(const CurveSystem& sys, const std::vector<int>& subset);

// First catalog curve that crosses `curve` and is disjoint from every other
// member of `within`.  Throws CatalogIncomplete when no catalog curve
// qualifies.
const CurveClass& dual_curve(const CurveSystem& sys, int curve,
                             const std::vector<int>& within);

}  // namespace syslab
