#pragma once

#include <utility>

#include "otdr/problem.hpp"
#include "otdr/solver.hpp"
#include "otdr/types.hpp"

namespace otdr {

// Entropic-OT baseline: alternating scaling on K = exp(-C/eps), or the
// log-domain potential form when log_domain is set (mandatory for small eps,
// where K underflows). Zero-mass atoms are dropped internally and their plan
// rows/columns restored as zeros.
struct SinkhornOptions {
  double epsilon = 1e-1;
  long max_iter = 10000;
  double tol = 1e-6;       // on both marginal-error 2-norms
  long check_every = 10;   // residuals cost a full plan pass here
  bool log_domain = false;
  bool record_trace = false;
};

// Shares SolveReport with the main solver; state.phi/state.psi carry the
// entropic potentials f, g (eps*log u, eps*log v), objective is <C,X> without
// the entropy term, and trace rows leave gap/dual_residual unset.
// Throws NumericalUnderflow when plain-domain scaling hits a zero or
// non-finite scaling factor (the cue to switch to log_domain).
SolveReport sinkhorn(const Problem& problem, const SinkhornOptions& options);

// (||X1 - p||_2, ||X^T 1 - q||_2).
std::pair<double, double> sinkhorn_plan_marginal_error(const Matrix& plan,
                                                       const Vector& p,
                                                       const Vector& q);

}  // namespace otdr
