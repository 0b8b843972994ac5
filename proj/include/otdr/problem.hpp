#pragma once

#include "otdr/types.hpp"

namespace otdr {

class Regularizer;

// A discrete OT instance: min <C,X> + h(X)  s.t.  X1 = p, X^T 1 = q, X >= 0.
// Construct through validate_problem so the invariants below hold:
//   - cost entrywise >= 0 and finite
//   - p, q entrywise >= 0, each summing to 1 within 1e-12
struct Problem {
  Matrix cost;
  Vector p, q;

  Index rows() const { return cost.rows(); }
  Index cols() const { return cost.cols(); }
};

// Checks dimensions and signs; marginals within 1e-6 of unit mass are
// renormalized exactly, anything further off is rejected. Idempotent:
// re-validating a validated problem is a bit-for-bit no-op.
Problem validate_problem(Matrix cost, Vector p, Vector q);

// Divides the cost by its largest entry so that max C_ij == 1 exactly.
// An all-zero cost is legal (any feasible plan is optimal for h = 0): the
// problem is returned unchanged and *all_zero is set when provided.
Problem normalize_cost(Problem problem, bool* all_zero = nullptr);

// <C,X> + h(X).
double primal_objective(const Problem& problem, const Matrix& plan,
                        const Regularizer& reg);

}  // namespace otdr
