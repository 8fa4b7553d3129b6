#pragma once

#include <Eigen/Dense>

namespace syslab {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Three-valued answer for certificate-backed predicates.  Queries whose LP
/// margins fall inside the configured tolerance band refuse to decide.
enum class Verdict { True, False, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "indeterminate";
  }
}

}  // namespace syslab
