#pragma once

#include <cstdint>

#include "syslab/types.hpp"

// Fully analytic four-function system on R^4 used to validate the
// certificate engine against closed-form ground truth:
//   f1 = e^{x1} + e^{-x2}    f2 = e^{x2} + e^{-x3}
//   f3 = e^{-x3} + e^{x4}    f4 = e^{-x4} + e^{x1}
// The gradient matrix drops from rank 4 to rank 3 exactly on the plane
// x2 = x4, where directions keeping f1 and f2 stationary move f3 and f4 in
// opposite senses.

namespace syslab {

Vec4 testbed_values(const Vec4& x);

/// Rows are the four gradients.
Mat4 testbed_gradients(const Vec4& x);

/// Closed-form determinant of the gradient matrix:
/// e^{x1} e^{-x3} (e^{x2} e^{-x4} - e^{-x2} e^{x4}).
double testbed_det(const Vec4& x);

struct TestbedReport {
  int samples = 0;
  std::uint64_t seed = 0;
  int rank_ok = 0;       // rank matches the determinant verdict
  int full_cone_ok = 0;  // all-increase direction exists
  int mixed_ok = 0;      // all four single-decrease cones exist
  int claim_iv_ok = 0;   // on-plane points: {grad f3, grad f4} eutactic on
                         // the null space of {grad f1, grad f2}
  int fd_ok = 0;         // analytic vs central-difference agreement
  int fd_checked = 0;
  int on_plane = 0;
  bool all_ok = false;
};

/// Alternates off-plane and on-plane samples; every check must pass at every
/// applicable sample for all_ok.
TestbedReport testbed_verify(int samples, std::uint64_t seed);

}  // namespace syslab
