#include "otdr/problem.hpp"

#include <cmath>
#include <string>

#include "otdr/errors.hpp"
#include "otdr/regularizers.hpp"

namespace otdr {

namespace {

constexpr double kMarginalRejectTol = 1e-6;
// Renormalization is skipped below this deviation so that validating an
// already-validated problem is bit-for-bit idempotent.
constexpr double kMarginalSkipTol = 1e-13;

void check_marginal(const Vector& v, const char* which) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      throw NegativeEntry(std::string(which) + "[" + std::to_string(i) +
                          "] must be finite and >= 0, got " +
                          std::to_string(v[i]));
    }
  }
  double sum = v.sum();
  if (std::abs(sum - 1.0) > kMarginalRejectTol) {
    throw MarginalSumOutOfRange(std::string(which) + " sums to " +
                                std::to_string(sum) +
                                ", more than 1e-6 away from 1");
  }
}

void renormalize(Vector& v) {
  double sum = v.sum();
  if (std::abs(sum - 1.0) > kMarginalSkipTol) v /= sum;
}

}  // namespace

Problem validate_problem(Matrix cost, Vector p, Vector q) {
  if (cost.rows() < 1 || cost.cols() < 1) {
    throw DimensionMismatch("cost must be at least 1x1");
  }
  if (p.size() != cost.rows() || q.size() != cost.cols()) {
    throw DimensionMismatch(
        "marginal lengths (" + std::to_string(p.size()) + ", " +
        std::to_string(q.size()) + ") do not match cost " +
        std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
  }
  for (Index i = 0; i < cost.rows(); ++i) {
    for (Index j = 0; j < cost.cols(); ++j) {
      if (!(cost(i, j) >= 0.0) || !std::isfinite(cost(i, j))) {
        throw NegativeEntry("cost(" + std::to_string(i) + "," +
                            std::to_string(j) +
                            ") must be finite and >= 0, got " +
                            std::to_string(cost(i, j)));
      }
    }
  }
  check_marginal(p, "p");
  check_marginal(q, "q");
  renormalize(p);
  renormalize(q);
  return Problem{std::move(cost), std::move(p), std::move(q)};
}

Problem normalize_cost(Problem problem, bool* all_zero) {
  double mx = problem.cost.maxCoeff();
  bool zero = !(mx > 0.0);
  if (all_zero) *all_zero = zero;
  if (!zero) problem.cost /= mx;
  return problem;
}

double primal_objective(const Problem& problem, const Matrix& plan,
                        const Regularizer& reg) {
  if (plan.rows() != problem.rows() || plan.cols() != problem.cols()) {
    throw DimensionMismatch("plan is " + std::to_string(plan.rows()) + "x" +
                            std::to_string(plan.cols()) + ", problem is " +
                            std::to_string(problem.rows()) + "x" +
                            std::to_string(problem.cols()));
  }
  return problem.cost.cwiseProduct(plan).sum() + reg.value(plan);
}

}  // namespace otdr
