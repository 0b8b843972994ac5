#include "otdr/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "otdr/duality.hpp"
#include "otdr/errors.hpp"

namespace otdr {

namespace {

constexpr long kStallWindow = 10000;
constexpr double kStallRelImprove = 1e-14;

// r, s, eta, phi, psi, a, b, theta updates shared by the reference and fused
// X-update paths. Must run right after X_{k+1} is in place; uses a_k, theta_k
// before overwriting them.
void recurrence_update(SolverState& st, const Problem& pr) {
  const double m = static_cast<double>(pr.rows());
  const double n = static_cast<double>(pr.cols());
  st.r = st.X.rowwise().sum() - pr.p;
  st.s = st.X.colwise().sum().transpose() - pr.q;
  st.eta = st.r.sum() / (m + n);
  const double shift = 2.0 * st.eta - st.theta;
  Vector phi_next = ((st.a - 2.0 * st.r).array() + shift) / n;
  Vector psi_next = ((st.b - 2.0 * st.s).array() + shift) / m;
  st.a -= st.r;
  st.b -= st.s;
  st.theta -= st.eta;
  st.phi = std::move(phi_next);
  st.psi = std::move(psi_next);
  ++st.k;
}

long support_size(const Matrix& X) {
  return (X.array() > 0.0).count();
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIter: return "MaxIter";
    case Termination::Stalled: return "Stalled";
  }
  return "?";
}

double default_stepsize(Index m, Index n) {
  return 2.0 / static_cast<double>(m + n);
}

WarmStart default_init(Index m, Index n) {
  const double mn = static_cast<double>(m + n);
  WarmStart w;
  w.plan0 = Matrix::Zero(m, n);
  w.phi0 = Vector::Constant(m, (1.0 + static_cast<double>(m) / mn) / (3.0 * mn));
  w.psi0 = Vector::Constant(n, (1.0 + static_cast<double>(n) / mn) / (3.0 * mn));
  return w;
}

SolverState make_state(const Problem& pr,
                       const std::optional<WarmStart>& init) {
  const Index m = pr.rows(), n = pr.cols();
  WarmStart w = init ? *init : default_init(m, n);
  if (w.plan0.rows() != m || w.plan0.cols() != n || w.phi0.size() != m ||
      w.psi0.size() != n) {
    throw DimensionMismatch("warm start dimensions do not match the problem");
  }
  if (!w.plan0.allFinite() || (w.plan0.array() < 0.0).any()) {
    throw NegativeEntry("warm-start plan must be finite and >= 0");
  }
  SolverState st;
  st.X = std::move(w.plan0);
  st.phi = std::move(w.phi0);
  st.psi = std::move(w.psi0);
  st.r = st.X.rowwise().sum() - pr.p;
  st.s = st.X.colwise().sum().transpose() - pr.q;
  // Bookkeeping seeds that make the first step reproduce DR from
  // Y_0 = X_0 + phi_0 1^T + 1 psi_0^T.
  st.a = static_cast<double>(n) * st.phi + st.r;
  st.b = static_cast<double>(m) * st.psi + st.s;
  st.theta = (st.X.sum() - 1.0) / static_cast<double>(m + n);
  st.eta = 0.0;
  st.k = 0;
  return st;
}

void step(SolverState& st, const Problem& pr, const Regularizer& reg,
          double rho) {
  st.X = (((st.X - rho * pr.cost).colwise() + st.phi).rowwise() +
          st.psi.transpose())
             .cwiseMax(0.0);
  reg.prox_in_place(st.X, rho);
  recurrence_update(st, pr);
}

SolveReport solve(const Problem& pr, const Regularizer& reg,
                  const SolverOptions& opt) {
  if (opt.max_iter <= 0) {
    throw ZeroIterations("max_iter must be positive, got " +
                         std::to_string(opt.max_iter));
  }
  if (opt.check_every <= 0) {
    throw std::invalid_argument("check_every must be positive");
  }
  if (!(opt.tol_primal > 0.0)) {
    throw std::invalid_argument("tol_primal must be positive");
  }
  if (opt.tol_gap && !(*opt.tol_gap > 0.0)) {
    throw std::invalid_argument("tol_gap must be positive when set");
  }
  const double rho =
      opt.rho > 0.0 ? opt.rho : default_stepsize(pr.rows(), pr.cols());

  SolveReport report;
  report.rho = rho;
  SolverState& st = report.state;
  st = make_state(pr, opt.init);

  // Fused path: B = X_k - rho*C is stored on even iterations so odd
  // iterations never touch C. Entrywise identical up to association order.
  Matrix fused_buffer;
  bool buffer_shifted = false;
  if (opt.fused) fused_buffer.resize(pr.rows(), pr.cols());

  std::vector<char> support_mask;
  if (opt.record_trace) {
    support_mask.assign(static_cast<std::size_t>(pr.rows() * pr.cols()), 0);
    for (Index i = 0; i < pr.rows(); ++i) {
      for (Index j = 0; j < pr.cols(); ++j) {
        support_mask[static_cast<std::size_t>(i) * pr.cols() + j] =
            st.X(i, j) > 0.0;
      }
    }
    report.support_last_change = 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    if (opt.deterministic) return 0.0;
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  double best_r_primal = std::numeric_limits<double>::infinity();
  long last_improvement = 0;
  report.termination = Termination::MaxIter;

  for (long k = 1; k <= opt.max_iter; ++k) {
    if (!opt.fused) {
      step(st, pr, reg, rho);
    } else {
      if (!buffer_shifted) {
        fused_buffer = -rho * pr.cost;
        st.X = (((st.X + fused_buffer).colwise() + st.phi).rowwise() +
                st.psi.transpose())
                   .cwiseMax(0.0);
        reg.prox_in_place(st.X, rho);
        fused_buffer += st.X;
        buffer_shifted = true;
      } else {
        st.X = ((fused_buffer.colwise() + st.phi).rowwise() +
                st.psi.transpose())
                   .cwiseMax(0.0);
        reg.prox_in_place(st.X, rho);
        buffer_shifted = false;
      }
      recurrence_update(st, pr);
    }

    const double r_primal = std::max(st.r.norm(), st.s.norm());
    report.r_primal = r_primal;
    if (!std::isfinite(r_primal)) {
      throw NonFiniteIterate("non-finite iterate at iteration " +
                             std::to_string(k) +
                             " (check rho and regularizer parameters)");
    }

    if (opt.record_trace) {
      for (Index i = 0; i < pr.rows(); ++i) {
        for (Index j = 0; j < pr.cols(); ++j) {
          char on = st.X(i, j) > 0.0;
          auto flat = static_cast<std::size_t>(i) * pr.cols() + j;
          if (support_mask[flat] != on) {
            support_mask[flat] = on;
            report.support_last_change = k;
          }
        }
      }
    }

    if (r_primal < best_r_primal * (1.0 - kStallRelImprove)) {
      best_r_primal = r_primal;
      last_improvement = k;
    }

    const bool at_check = (k % opt.check_every == 0);
    bool converged = false;
    double gap = std::numeric_limits<double>::quiet_NaN();
    double dres = std::numeric_limits<double>::quiet_NaN();
    const bool want_cert =
        (at_check && opt.tol_gap.has_value() &&
         r_primal <= opt.tol_primal) ||
        (opt.record_trace && (at_check || k == opt.max_iter));
    if (want_cert) {
      DualCertificate cert = duality_gap(pr, reg, st, rho);
      gap = cert.gap;
      dres = cert.dual_residual;
    }
    if (at_check && r_primal <= opt.tol_primal) {
      converged = !opt.tol_gap ||
                  (std::abs(gap) <= *opt.tol_gap && dres <= *opt.tol_gap);
    }

    if (opt.record_trace && (at_check || converged || k == opt.max_iter)) {
      report.trace.push_back(TraceRow{k, r_primal, gap, dres,
                                      support_size(st.X), elapsed_ms()});
    }

    if (converged) {
      report.termination = Termination::Converged;
      break;
    }
    if (k - last_improvement >= kStallWindow) {
      report.termination = Termination::Stalled;
      break;
    }
  }

  report.iterations = st.k;
  report.objective = primal_objective(pr, st.X, reg);
  return report;
}

long compute_skip_count(const Problem& pr, double /*rho*/) {
  const double m = static_cast<double>(pr.rows());
  const double n = static_cast<double>(pr.cols());
  double min_term = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < pr.rows(); ++i) {
    for (Index j = 0; j < pr.cols(); ++j) {
      double denom = m * pr.p[i] + n * pr.q[j] + 1.0;
      double term =
          std::ceil(pr.cost(i, j) * m * n / (m + n) / denom - 1.0);
      min_term = std::min(min_term, term);
    }
  }
  return std::max(0L, static_cast<long>(min_term));
}

}  // namespace otdr
