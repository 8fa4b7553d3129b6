#include "syslab/rng.hpp"

#include <cmath>

namespace syslab {

double SplitMix64::next_normal() {
  // Box-Muller on two fresh uniforms; the pair is consumed even though only
  // one normal is returned, keeping the stream position deterministic.
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * M_PI * u2);
}

}  // namespace syslab
