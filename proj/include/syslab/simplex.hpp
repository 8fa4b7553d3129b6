#pragma once

#include "syslab/types.hpp"

// Small dense linear-programming solver used by the certificate engine.
// Instances here have at most a few dozen rows and columns, so a tableau
// simplex with Bland's rule is plenty: deterministic, terminating, and free
// of external dependencies.

namespace syslab {

struct LpProblem {
  VecX c;     // maximize c . x over free variables x
  MatX A_ub;  // A_ub x <= b_ub
  VecX b_ub;
  MatX A_eq;  // A_eq x = b_eq
  VecX b_eq;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  VecX x;
};

LpResult solve_lp(const LpProblem& p);

}  // namespace syslab
