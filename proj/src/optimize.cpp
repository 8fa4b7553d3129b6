#include "syslab/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "syslab/rng.hpp"

namespace syslab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;
constexpr double kBoundProximity = 1e-9;
constexpr int kProjectionIterations = 40;

Vec6 clamp_to_box(const Vec6& v) {
  Vec6 out = v;
  for (int i = 0; i < 3; ++i)
    out[i] = std::clamp(out[i], kBoxLengthLo, kBoxLengthHi);
  for (int i = 3; i < 6; ++i)
    out[i] = std::clamp(out[i], kBoxTwistLo, kBoxTwistHi);
  return out;
}

bool at_box_face(const Vec6& v) {
  for (int i = 0; i < 3; ++i)
    if (v[i] <= kBoxLengthLo + kBoundProximity ||
        v[i] >= kBoxLengthHi - kBoundProximity)
      return true;
  for (int i = 3; i < 6; ++i)
    if (v[i] <= kBoxTwistLo + kBoundProximity ||
        v[i] >= kBoxTwistHi - kBoundProximity)
      return true;
  return false;
}

void check_curve_subset(const CurveSystem& sys, const std::vector<int>& curves) {
  if (curves.empty()) throw EmptySystem("curve subset is empty");
  for (int c : curves)
    if (c < 0 || c >= static_cast<int>(sys.curves.size()))
      throw Error("curve index out of range");
}

Vec6 weighted_gradient(const WeightVector& A, const CurveSystem& sys,
                       const std::vector<int>& curves, const FNPoint& x) {
  const GradientSet gs = gradients(sys, curves, x);
  return gs.rows.transpose() * A.weights;
}

// True when `a` is lexicographically before `b`.
bool lex_before(const Vec6& a, const Vec6& b) {
  for (int i = 0; i < 6; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

LocusSpec LocusSpec::zero_offsets(std::vector<int> curves) {
  LocusSpec spec;
  spec.offsets = VecX::Zero(static_cast<int>(curves.size()));
  spec.curves = std::move(curves);
  return spec;
}

const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::Regular: return "regular";
    case PointKind::Boundary: return "boundary";
    case PointKind::Critical: return "critical";
    default: return "indeterminate";
  }
}

const char* to_string(LocusClass c) {
  switch (c) {
    case LocusClass::Inner: return "inner";
    case LocusClass::Outer: return "outer";
    default: return "borderline";
  }
}

MinimizeResult minimize_weighted(const WeightVector& A, const CurveSystem& sys,
                                 const std::vector<int>& curves,
                                 const FNPoint& x0, double grad_tol,
                                 int max_iter) {
  check_curve_subset(sys, curves);
  if (!(grad_tol > 0)) throw Error("gradient tolerance must be positive");

  const auto objective = [&](const Vec6& v) {
    return weighted_length(A, sys, curves, FNPoint::from_vector(v));
  };

  Vec6 v = clamp_to_box(x0.as_vector());
  double fv = objective(v);
  Vec6 g = weighted_gradient(A, sys, curves, FNPoint::from_vector(v));
  Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Identity();

  MinimizeResult result;
  for (int it = 0; it < max_iter; ++it) {
    result.iterations = it;
    if (g.norm() <= grad_tol) {
      result.converged = true;
      break;
    }

    Vec6 d = -(H * g);
    if (!(d.dot(g) < 0)) {
      H.setIdentity();
      d = -g;
    }

    // Backtracking line search with box clamping; the sufficient-decrease
    // test uses the clamped displacement.
    double t = 1.0;
    Vec6 p;
    double fp = 0.0;
    bool accepted = false;
    while (t >= kMinStep) {
      p = clamp_to_box(v + t * d);
      const double pred = g.dot(p - v);
      if (pred < 0) {
        fp = objective(p);
        if (fp <= fv + kArmijo * pred) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (at_box_face(v))
        throw DivergedAsExpected(
            "iterate pinned to the search box face with no feasible "
            "decrease; the curve subset does not bound the objective");
      break;  // interior stall: gradient noise floor reached
    }

    const Vec6 gnew =
        weighted_gradient(A, sys, curves, FNPoint::from_vector(p));
    const Vec6 s = p - v;
    const Vec6 y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix<double, 6, 6> I =
          Eigen::Matrix<double, 6, 6>::Identity();
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    v = p;
    fv = fp;
    g = gnew;
  }

  result.point = FNPoint::from_vector(v);
  result.value = fv;
  result.gradient_norm = g.norm();
  if (g.norm() <= grad_tol) result.converged = true;
  return result;
}

MinimizeResult minimize_multistart(const WeightVector& A,
                                   const CurveSystem& sys,
                                   const std::vector<int>& curves,
                                   std::uint64_t seed, int starts,
                                   double grad_tol, int max_iter) {
  if (starts < 1) throw Error("need at least one start");
  SplitMix64 rng(seed);
  bool have = false;
  MinimizeResult best;
  bool have_error = false;
  std::string first_error;
  for (int s = 0; s < starts; ++s) {
    FNPoint x0;
    if (s == 0) {
      x0.cuff_lengths << 2.5, 2.5, 2.5;
      x0.twists << 0, 0, 0;
    } else {
      for (int i = 0; i < 3; ++i) x0.cuff_lengths[i] = rng.uniform(0.5, 5.0);
      for (int i = 0; i < 3; ++i) x0.twists[i] = rng.uniform(-3.0, 3.0);
    }
    try {
      MinimizeResult r =
          minimize_weighted(A, sys, curves, x0, grad_tol, max_iter);
      const Vec6 rv = r.point.as_vector();
      if (!have || r.value < best.value - 1e-12 ||
          (std::abs(r.value - best.value) <= 1e-12 &&
           lex_before(rv, best.point.as_vector()))) {
        best = r;
        have = true;
      }
    } catch (const DivergedAsExpected& e) {
      if (!have_error) {
        have_error = true;
        first_error = e.what();
      }
    }
  }
  if (!have) throw DivergedAsExpected(first_error);
  return best;
}

namespace {

struct LocusWork {
  std::vector<int> curves;
  VecX offsets;  // relative to the first curve, first entry zero
};

LocusWork validate_spec(const LocusSpec& spec, const CurveSystem& sys) {
  if (spec.curves.size() < 2)
    throw Error("locus needs at least two curves");
  check_curve_subset(sys, spec.curves);
  if (spec.offsets.size() != static_cast<Eigen::Index>(spec.curves.size()))
    throw Error("locus offsets must match the curve count");
  if (!spec.offsets.allFinite()) throw Error("locus offsets must be finite");
  LocusWork w;
  w.curves = spec.curves;
  w.offsets = spec.offsets.array() - spec.offsets[0];
  return w;
}

VecX locus_residual(const LocusWork& w, const CurveSystem& sys,
                    const FNPoint& x) {
  const int k = static_cast<int>(w.curves.size());
  VecX lengths(k);
  for (int i = 0; i < k; ++i) lengths[i] = length(sys.curves[w.curves[i]], x);
  VecX r(k - 1);
  for (int i = 1; i < k; ++i) r[i - 1] = lengths[i] - lengths[0] - w.offsets[i];
  return r;
}

MatX constraint_jacobian(const MatX& rows) {
  const int k = static_cast<int>(rows.rows());
  MatX J(k - 1, 6);
  for (int i = 1; i < k; ++i) J.row(i - 1) = rows.row(i) - rows.row(0);
  return J;
}

// Newton iteration onto the offset constraints; minimal-norm updates.
// Any evaluation failure along the way counts as projection failure.
Vec6 project_to_locus(const LocusWork& w, const CurveSystem& sys, Vec6 v) {
  try {
    for (int it = 0; it < kProjectionIterations; ++it) {
      const FNPoint x = FNPoint::from_vector(v);
      const VecX r = locus_residual(w, sys, x);
      if (r.cwiseAbs().maxCoeff() <= kConstraintTol) return v;
      const GradientSet gs = gradients(sys, w.curves, x);
      const MatX J = constraint_jacobian(gs.rows);
      const VecX step = J.completeOrthogonalDecomposition().solve(-r);
      if (!step.allFinite() || step.norm() > 1e3)
        throw LocusProjectionFailed("projection step diverged");
      v += step;
    }
  } catch (const LocusProjectionFailed&) {
    throw;
  } catch (const Error& e) {
    throw LocusProjectionFailed(std::string("projection left the valid "
                                            "coordinate domain: ") +
                                e.what());
  }
  throw LocusProjectionFailed(
      "offset constraints not met after the Newton iteration cap");
}

bool inside_box(const Vec6& v) {
  for (int i = 0; i < 3; ++i)
    if (v[i] < kBoxLengthLo || v[i] > kBoxLengthHi) return false;
  for (int i = 3; i < 6; ++i)
    if (v[i] < kBoxTwistLo || v[i] > kBoxTwistHi) return false;
  return true;
}

}  // namespace

MinimizeResult restricted_minimize(const LocusSpec& spec, const CurveSystem& sys,
                                   const FNPoint& x0, double grad_tol,
                                   int max_iter) {
  const LocusWork w = validate_spec(spec, sys);
  if (!(grad_tol > 0)) throw Error("gradient tolerance must be positive");

  Vec6 v = project_to_locus(w, sys, x0.as_vector());
  const auto objective = [&](const Vec6& u) {
    return length(sys.curves[w.curves[0]], FNPoint::from_vector(u));
  };
  double fv = objective(v);

  const auto projected_gradient = [&](const Vec6& u, Vec6& pg_out) {
    const GradientSet gs = gradients(sys, w.curves, FNPoint::from_vector(u));
    const MatX J = constraint_jacobian(gs.rows);
    const MatX pinv = J.completeOrthogonalDecomposition().pseudoInverse();
    const Vec6 g = gs.rows.row(0).transpose();
    pg_out = g - pinv * (J * g);
    return g;
  };

  const auto line_search = [&](const Vec6& from, double ffrom, const Vec6& g,
                               const Vec6& d, Vec6& p, double& fp) {
    double t = 1.0;
    while (t >= kMinStep) {
      bool usable = true;
      try {
        p = project_to_locus(w, sys, from + t * d);
      } catch (const LocusProjectionFailed&) {
        usable = false;
      }
      if (usable && inside_box(p)) {
        const double pred = g.dot(p - from);
        if (pred < 0) {
          fp = objective(p);
          if (fp <= ffrom + kArmijo * pred) return true;
        }
      }
      t *= 0.5;
    }
    return false;
  };

  MinimizeResult result;
  Vec6 pg = Vec6::Zero();
  Vec6 g = projected_gradient(v, pg);
  Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Identity();
  bool h_is_identity = true;
  for (int it = 0; it < max_iter; ++it) {
    result.iterations = it;
    if (pg.norm() <= grad_tol) {
      result.converged = true;
      break;
    }

    Vec6 d = -(H * pg);
    if (!(d.dot(pg) < 0)) {
      H.setIdentity();
      h_is_identity = true;
      d = -pg;
    }

    Vec6 p;
    double fp = 0.0;
    bool accepted = line_search(v, fv, g, d, p, fp);
    if (!accepted && !h_is_identity) {
      // The quasi-Newton model went stale; fall back to steepest descent.
      H.setIdentity();
      h_is_identity = true;
      accepted = line_search(v, fv, g, -pg, p, fp);
    }
    if (!accepted) {
      if (at_box_face(v))
        throw DivergedAsExpected(
            "locus descent pinned to the search box face; the common "
            "length has no interior minimum on this locus");
      break;  // noise floor on the locus
    }

    Vec6 pg_new;
    g = projected_gradient(p, pg_new);
    const Vec6 s = p - v;
    const Vec6 y = pg_new - pg;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix<double, 6, 6> I =
          Eigen::Matrix<double, 6, 6>::Identity();
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
      h_is_identity = false;
    }
    v = p;
    fv = fp;
    pg = pg_new;
  }

  result.point = FNPoint::from_vector(v);
  result.value = fv;
  result.gradient_norm = pg.norm();
  if (pg.norm() <= grad_tol) result.converged = true;
  return result;
}

CriticalReport classify_point(const CurveSystem& sys, const FNPoint& x,
                              const ClassifyOptions& opts) {
  CriticalReport report;
  const SystoleResult sr = systole(sys, x, opts.systole_rel);
  report.systoles = sr.systoles;
  const GradientSet gs = gradients(sys, sr.systoles, x, opts.fd_step);
  report.rank = rank_and_index(gs.rows);

  report.eutactic = is_eutactic(gs.rows, opts.resid_tol);
  if (report.eutactic.verdict == Verdict::True) {
    report.kind = PointKind::Critical;
    report.index = report.rank.index;
    return report;
  }
  if (report.eutactic.verdict == Verdict::Indeterminate) {
    report.kind = PointKind::Indeterminate;
    return report;
  }

  // Proper filling subsets of the systole set, largest first.
  const int n = static_cast<int>(sr.systoles.size());
  bool any_indeterminate = false;
  for (int size = n - 1; size >= 2; --size) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != size) continue;
      std::vector<int> subset;
      std::vector<int> rows_idx;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          subset.push_back(sr.systoles[i]);
          rows_idx.push_back(i);
        }
      if (!fills(sys, subset).fills) continue;
      MatX sub(size, 6);
      for (int i = 0; i < size; ++i) sub.row(i) = gs.rows.row(rows_idx[i]);
      const ConeCertificate cert = is_eutactic(sub, opts.resid_tol);
      if (cert.verdict == Verdict::True) {
        report.kind = PointKind::Boundary;
        report.boundary_subset = subset;
        report.boundary_eutactic = cert;
        return report;
      }
      if (cert.verdict == Verdict::Indeterminate) any_indeterminate = true;
    }
  }
  if (any_indeterminate) {
    report.kind = PointKind::Indeterminate;
    return report;
  }

  report.full_cone = full_cone_exists(gs.rows);
  report.kind = report.full_cone.verdict == Verdict::True
                    ? PointKind::Regular
                    : PointKind::Indeterminate;
  return report;
}

LocusReport classify_locus(const LocusSpec& spec, const CurveSystem& sys,
                           const FNPoint& x0, const ClassifyOptions& opts) {
  if (!fills(sys, spec.curves).fills)
    throw NotFilling("locus classification needs a filling curve set");

  LocusReport report;
  report.minimum = restricted_minimize(spec, sys, x0);
  const GradientSet gs =
      gradients(sys, spec.curves, report.minimum.point, opts.fd_step);

  report.eutactic = is_eutactic(gs.rows, opts.resid_tol);
  if (report.eutactic.verdict == Verdict::True) {
    report.cls = LocusClass::Inner;
    return report;
  }
  // Outer needs the simultaneous-decrease cone to clear the noise scale of
  // the located minimum, not merely the LP band: its margin is the distance
  // from the origin to the normalized gradient hull.
  report.decrease_cone = full_cone_exists(-gs.rows);
  report.cls = (report.decrease_cone.verdict == Verdict::True &&
                report.decrease_cone.margin >= opts.resid_tol)
                   ? LocusClass::Outer
                   : LocusClass::Borderline;
  return report;
}

DescendentReport descendents_at(const CurveSystem& sys, const FNPoint& x,
                                const ClassifyOptions& opts) {
  DescendentReport report;
  report.at = classify_point(sys, x, opts);
  if (report.at.kind != PointKind::Critical)
    throw NotCritical("descendent enumeration needs a certified critical point");
  report.systoles = report.at.systoles;
  const GradientSet gs = gradients(sys, report.systoles, x, opts.fd_step);
  report.families = find_descendents(gs.rows, opts.resid_tol);
  for (auto& subset : report.families.descendents)
    for (int& i : subset) i = report.systoles[i];
  for (auto& subset : report.families.subdescendents)
    for (int& i : subset) i = report.systoles[i];
  return report;
}

MinimizeResult schmutz_point(const CurveSystem& sys, std::uint64_t seed) {
  std::vector<int> all(sys.curves.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  WeightVector A;
  A.weights = VecX::Constant(static_cast<int>(all.size()),
                             1.0 / static_cast<double>(all.size()));
  return minimize_multistart(A, sys, all, seed);
}

}  // namespace syslab
