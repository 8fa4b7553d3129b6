#pragma once

#include <stdexcept>
#include <string>

namespace syslab {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// |trace| <= 2: the element is not hyperbolic, no translation length exists.
class NonHyperbolicElement : public Error {
 public:
  explicit NonHyperbolicElement(const std::string& what) : Error(what) {}
};

/// Hexagon side lengths must be finite and strictly positive.
class InvalidSideLength : public Error {
 public:
  explicit InvalidSideLength(const std::string& what) : Error(what) {}
};

/// Two axes share an ideal endpoint; no crossing angle is defined.
class TangentAtInfinity : public Error {
 public:
  explicit TangentAtInfinity(const std::string& what) : Error(what) {}
};

/// Curve system operations need at least one curve.
class EmptySystem : public Error {
 public:
  explicit EmptySystem(const std::string& what) : Error(what) {}
};

/// The requested operation requires a filling curve system.
class NotFilling : public Error {
 public:
  explicit NotFilling(const std::string& what) : Error(what) {}
};

/// No stored curve satisfies the dual-curve requirements; the catalog
/// must be extended before the query can be answered.
class CatalogIncomplete : public Error {
 public:
  explicit CatalogIncomplete(const std::string& what) : Error(what) {}
};

/// Catalog file violates the documented format.
class CatalogFormatError : public Error {
 public:
  explicit CatalogFormatError(const std::string& what) : Error(what) {}
};

/// Weight vector does not align with the curve subset it is applied to.
class WeightMismatch : public Error {
 public:
  explicit WeightMismatch(const std::string& what) : Error(what) {}
};

/// A gradient row is identically zero; cone verdicts would be vacuous.
class DegenerateGradient : public Error {
 public:
  explicit DegenerateGradient(const std::string& what) : Error(what) {}
};

/// Projected cone query received a zero-dimensional subspace.
class EmptySubspace : public Error {
 public:
  explicit EmptySubspace(const std::string& what) : Error(what) {}
};

/// Descendent enumeration is only defined at critical points.
class NotCritical : public Error {
 public:
  explicit NotCritical(const std::string& what) : Error(what) {}
};

/// Descent drove the iterate out of the search box.  Expected behaviour for
/// non-filling curve sets, whose lengths can be decreased without bound.
class DivergedAsExpected : public Error {
 public:
  explicit DivergedAsExpected(const std::string& what) : Error(what) {}
};

/// Newton projection onto an equal-length locus failed to converge.
class LocusProjectionFailed : public Error {
 public:
  explicit LocusProjectionFailed(const std::string& what) : Error(what) {}
};

/// Conjugate search found no axis crossing for a pair with stored crossings.
class AngleSearchFailed : public Error {
 public:
  explicit AngleSearchFailed(const std::string& what) : Error(what) {}
};

/// Configuration file or flag value is malformed.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace syslab
