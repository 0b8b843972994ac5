#pragma once

#include <utility>

#include "otdr/problem.hpp"
#include "otdr/regularizers.hpp"
#include "otdr/solver.hpp"
#include "otdr/types.hpp"

namespace otdr {

/* Duality diagnostics. The dual of min <C,X> + h(X) over the transport
 * polytope maximizes p^T mu + q^T nu - h*(U) over dual variables of the
 * rank-2 form U = mu 1^T + 1 nu^T - C restricted to u_ij >= (grad h)(0);
 * the solver's correction vectors expose mu = phi/rho, nu = psi/rho and the
 * candidate U = [Xbar - X]_+ / rho without extra work beyond one clamp pass.
 */

struct DualCertificate {
  Vector mu, nu;
  double dual_value = 0.0;
  double gap = 0.0;            // primal - dual at the current iterate
  double dual_residual = 0.0;  // violation of dual feasibility; 0 for smooth h
};

// (phi/rho, psi/rho).
std::pair<Vector, Vector> recover_duals(const SolverState& state, double rho);

// Evaluates the certificate at the current state; costs one clamp pass over
// the plan. gap = <C,X> + h(X) - (p^T phi + q^T psi)/rho + h*([Xbar-X]_+/rho).
DualCertificate duality_gap(const Problem& problem, const Regularizer& reg,
                            const SolverState& state, double rho);

// Solves to tolerance and returns (objective value, converged plan). The plan
// is the gradient of the OT value with respect to C (unique for strongly
// convex h; otherwise one valid subgradient of the minimization value).
std::pair<double, Matrix> ot_cost_gradient(const Problem& problem,
                                           const Regularizer& reg,
                                           const SolverOptions& options);

}  // namespace otdr
