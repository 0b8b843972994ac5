#include "otdr/duality.hpp"

namespace otdr {

std::pair<Vector, Vector> recover_duals(const SolverState& state, double rho) {
  return {state.phi / rho, state.psi / rho};
}

DualCertificate duality_gap(const Problem& pr, const Regularizer& reg,
                            const SolverState& st, double rho) {
  DualCertificate cert;
  cert.mu = st.phi / rho;
  cert.nu = st.psi / rho;
  // One clamp pass rebuilds the pre-prox iterate for the current state.
  Matrix Xbar = (((st.X - rho * pr.cost).colwise() + st.phi).rowwise() +
                 st.psi.transpose())
                    .cwiseMax(0.0);
  const double primal = primal_objective(pr, st.X, reg);
  const double linear = (pr.p.dot(st.phi) + pr.q.dot(st.psi)) / rho;
  cert.dual_value = linear - reg.conjugate_gap_term(st.X, Xbar, rho);
  cert.gap = primal - cert.dual_value;
  cert.dual_residual = reg.dual_residual(st.X, Xbar, rho);
  return cert;
}

std::pair<double, Matrix> ot_cost_gradient(const Problem& pr,
                                           const Regularizer& reg,
                                           const SolverOptions& options) {
  SolveReport report = solve(pr, reg, options);
  return {report.objective, report.plan()};
}

}  // namespace otdr
