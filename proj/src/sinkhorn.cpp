#include "otdr/sinkhorn.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "otdr/errors.hpp"

namespace otdr {

namespace {

// Stabilized log-sum-exp over one row/column of (pot - C)/eps.
double lse(const Vector& x) {
  double mx = x.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += std::exp(x[i] - mx);
  return mx + std::log(sum);
}

}  // namespace

std::pair<double, double> sinkhorn_plan_marginal_error(const Matrix& plan,
                                                       const Vector& p,
                                                       const Vector& q) {
  return {(plan.rowwise().sum() - p).norm(),
          (plan.colwise().sum().transpose() - q).norm()};
}

SolveReport sinkhorn(const Problem& pr, const SinkhornOptions& opt) {
  if (!(opt.epsilon > 0.0)) {
    throw std::invalid_argument("sinkhorn needs epsilon > 0");
  }
  if (opt.max_iter <= 0) {
    throw ZeroIterations("max_iter must be positive, got " +
                         std::to_string(opt.max_iter));
  }
  if (opt.check_every <= 0 || !(opt.tol > 0.0)) {
    throw std::invalid_argument("check_every and tol must be positive");
  }

  // The scaling divides by marginals, so zero-mass atoms are dropped here and
  // their plan rows/columns restored as zeros afterwards.
  std::vector<Index> rows, cols;
  for (Index i = 0; i < pr.rows(); ++i) {
    if (pr.p[i] > 0.0) rows.push_back(i);
  }
  for (Index j = 0; j < pr.cols(); ++j) {
    if (pr.q[j] > 0.0) cols.push_back(j);
  }
  const Index mr = static_cast<Index>(rows.size());
  const Index nr = static_cast<Index>(cols.size());
  Matrix C(mr, nr);
  Vector p(mr), q(nr);
  for (Index i = 0; i < mr; ++i) {
    p[i] = pr.p[rows[i]];
    for (Index j = 0; j < nr; ++j) C(i, j) = pr.cost(rows[i], cols[j]);
  }
  for (Index j = 0; j < nr; ++j) q[j] = pr.q[cols[j]];

  const double eps = opt.epsilon;
  Vector f = Vector::Zero(mr), g = Vector::Zero(nr);  // potentials
  Matrix K;
  Vector u, v;
  if (!opt.log_domain) {
    // Eigen's vectorized exp clamps huge negative arguments to a subnormal
    // constant instead of underflowing to zero, which silently erases the
    // cost structure. A row (or column) is lost once even its *largest*
    // kernel entry exp(-min_j C_ij / eps) leaves the normal range.
    constexpr double kExpArgLimit = 708.0;  // ~ -log(DBL_MIN)
    if ((C.rowwise().minCoeff().array() / eps > kExpArgLimit).any() ||
        (C.colwise().minCoeff().array() / eps > kExpArgLimit).any()) {
      throw NumericalUnderflow(
          "plain-domain Sinkhorn kernel underflows at epsilon = " +
          std::to_string(eps) + "; use log_domain");
    }
    K = (-C / eps).array().exp();
    u = Vector::Ones(mr);
    v = Vector::Ones(nr);
  }

  SolveReport report;
  report.rho = 0.0;
  report.termination = Termination::MaxIter;
  Matrix X(mr, nr);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  auto build_plan = [&] {
    if (!opt.log_domain) {
      X = u.asDiagonal() * K * v.asDiagonal();
    } else {
      for (Index i = 0; i < mr; ++i) {
        for (Index j = 0; j < nr; ++j) {
          X(i, j) = std::exp((f[i] + g[j] - C(i, j)) / eps);
        }
      }
    }
  };

  long iterations = 0;
  double r_primal = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= opt.max_iter; ++k) {
    if (!opt.log_domain) {
      Vector Kv = K * v;
      if ((Kv.array() <= 0.0).any() || !Kv.allFinite()) {
        throw NumericalUnderflow(
            "plain-domain Sinkhorn underflow at sweep " + std::to_string(k) +
            "; use log_domain for epsilon this small");
      }
      u = p.cwiseQuotient(Kv);
      Vector Ktu = K.transpose() * u;
      if ((Ktu.array() <= 0.0).any() || !Ktu.allFinite()) {
        throw NumericalUnderflow(
            "plain-domain Sinkhorn underflow at sweep " + std::to_string(k) +
            "; use log_domain for epsilon this small");
      }
      v = q.cwiseQuotient(Ktu);
      if (!u.allFinite() || !v.allFinite()) {
        throw NumericalUnderflow("non-finite Sinkhorn scaling at sweep " +
                                 std::to_string(k));
      }
    } else {
      for (Index i = 0; i < mr; ++i) {
        f[i] = eps * std::log(p[i]) - eps * lse((g - C.row(i).transpose()) / eps);
      }
      for (Index j = 0; j < nr; ++j) {
        g[j] = eps * std::log(q[j]) - eps * lse((f - C.col(j)) / eps);
      }
    }
    iterations = k;

    if (k % opt.check_every == 0 || k == opt.max_iter) {
      build_plan();
      auto [ep, eq] = sinkhorn_plan_marginal_error(X, p, q);
      r_primal = std::max(ep, eq);
      if (opt.record_trace) {
        report.trace.push_back(
            TraceRow{k, r_primal, std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN(),
                     (X.array() > 0.0).count(), elapsed_ms()});
      }
      if (ep <= opt.tol && eq <= opt.tol) {
        report.termination = Termination::Converged;
        break;
      }
    }
  }
  build_plan();

  if (!opt.log_domain) {
    f = eps * u.array().log();
    g = eps * v.array().log();
  }

  // Restore dropped atoms as zero rows/columns (potentials stay 0 there).
  SolverState& st = report.state;
  st.X = Matrix::Zero(pr.rows(), pr.cols());
  st.phi = Vector::Zero(pr.rows());
  st.psi = Vector::Zero(pr.cols());
  for (Index i = 0; i < mr; ++i) {
    st.phi[rows[i]] = f[i];
    for (Index j = 0; j < nr; ++j) st.X(rows[i], cols[j]) = X(i, j);
  }
  for (Index j = 0; j < nr; ++j) st.psi[cols[j]] = g[j];
  st.r = st.X.rowwise().sum() - pr.p;
  st.s = st.X.colwise().sum().transpose() - pr.q;
  st.k = iterations;

  report.iterations = iterations;
  report.r_primal = std::max(st.r.norm(), st.s.norm());
  report.objective = pr.cost.cwiseProduct(st.X).sum();
  return report;
}

}  // namespace otdr
