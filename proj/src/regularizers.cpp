#include "otdr/regularizers.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "otdr/errors.hpp"

namespace otdr {

namespace {

std::string with_param(const char* name, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:%s=%g", name, key, v);
  return buf;
}

}  // namespace

double Regularizer::conjugate_gap_term(const Matrix&, const Matrix&,
                                       double) const {
  return 0.0;
}

double Regularizer::dual_residual(const Matrix& X, const Matrix& Xbar,
                                  double) const {
  // Distance past the dual-feasible set. The candidate dual matrix is
  // [Xbar - X]_+ / rho; feasibility for indicator/norm-type h means the
  // lambda-threshold prox annihilates it, and since rho = 2/(m+n) <= 1 the
  // unscaled prox below vanishing implies the same at the fixed point.
  Matrix U = (Xbar - X).cwiseMax(0.0);
  prox_in_place(U, 1.0);
  return U.norm();
}

QuadraticReg::QuadraticReg(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("quadratic regularizer needs alpha > 0");
  }
}

std::string QuadraticReg::name() const {
  return with_param("quad", "alpha", alpha_);
}

double QuadraticReg::value(const Matrix& X) const {
  return 0.5 * alpha_ * X.squaredNorm();
}

void QuadraticReg::prox_in_place(Matrix& V, double rho) const {
  V /= 1.0 + rho * alpha_;
}

double QuadraticReg::conjugate_gap_term(const Matrix& X, const Matrix& Xbar,
                                        double rho) const {
  // h*(U) = ||U||^2/(2 alpha) at U = [Xbar - X]_+ / rho.
  double sq = (Xbar - X).cwiseMax(0.0).squaredNorm();
  return sq / (2.0 * alpha_ * rho * rho);
}

GroupLassoReg::GroupLassoReg(double lambda, GroupPartition partition)
    : lambda_(lambda), partition_(std::move(partition)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("group lasso needs lambda > 0");
  }
}

std::string GroupLassoReg::name() const {
  return with_param("gl", "lambda", lambda_);
}

double GroupLassoReg::value(const Matrix& X) const {
  double total = 0.0;
  for (std::size_t g = 0; g < partition_.num_groups(); ++g) {
    double sq = 0.0;
    for (auto [i, j] : partition_.group(g)) sq += X(i, j) * X(i, j);
    total += std::sqrt(sq);
  }
  return lambda_ * total;
}

void GroupLassoReg::prox_in_place(Matrix& V, double rho) const {
  double threshold = rho * lambda_;
  for (std::size_t g = 0; g < partition_.num_groups(); ++g) {
    auto cells = partition_.group(g);
    double sq = 0.0;
    for (auto [i, j] : cells) sq += V(i, j) * V(i, j);
    double norm = std::sqrt(sq);
    if (norm <= threshold) {
      for (auto [i, j] : cells) V(i, j) = 0.0;
    } else {
      double scale = 1.0 - threshold / norm;
      for (auto [i, j] : cells) V(i, j) *= scale;
    }
  }
}

WeightedL1Reg::WeightedL1Reg(Matrix weights) : weights_(std::move(weights)) {
  for (Index i = 0; i < weights_.rows(); ++i) {
    for (Index j = 0; j < weights_.cols(); ++j) {
      if (!(weights_(i, j) >= 0.0) || !std::isfinite(weights_(i, j))) {
        throw std::invalid_argument("weighted-l1 weights must be >= 0");
      }
    }
  }
}

double WeightedL1Reg::value(const Matrix& X) const {
  return weights_.cwiseProduct(X.cwiseAbs()).sum();
}

void WeightedL1Reg::prox_in_place(Matrix& V, double rho) const {
  V = (V - rho * weights_).cwiseMax(0.0);
}

ForbiddenReg::ForbiddenReg(Index rows, Index cols,
                           std::vector<std::pair<Index, Index>> forbidden)
    : rows_(rows), cols_(cols), cells_(std::move(forbidden)) {
  for (auto [i, j] : cells_) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
      throw std::invalid_argument("forbidden cell (" + std::to_string(i) +
                                  "," + std::to_string(j) + ") outside " +
                                  std::to_string(rows_) + "x" +
                                  std::to_string(cols_) + " grid");
    }
  }
}

double ForbiddenReg::value(const Matrix& X) const {
  for (auto [i, j] : cells_) {
    if (X(i, j) != 0.0) return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

void ForbiddenReg::prox_in_place(Matrix& V, double) const {
  for (auto [i, j] : cells_) V(i, j) = 0.0;
}

HypentropicReg::HypentropicReg(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("hypentropic regularizer needs beta > 0");
  }
}

std::string HypentropicReg::name() const {
  return with_param("hypent", "beta", beta_);
}

double HypentropicReg::value(const Matrix& X) const {
  double total = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      double x = X(i, j);
      total += x * std::asinh(x / beta_) - std::hypot(x, beta_);
    }
  }
  return total;
}

void HypentropicReg::prox_in_place(Matrix& V, double rho) const {
  /* Per entry, solve g(x) = rho*asinh(x/beta) + x - v = 0. g is strictly
   * increasing with g(0) = -v <= 0 and g(v) >= 0, so the root lives in
   * [0, v]: Newton with a bisection safeguard keeps the bracket valid. */
  for (Index i = 0; i < V.rows(); ++i) {
    for (Index j = 0; j < V.cols(); ++j) {
      double v = V(i, j);
      if (v == 0.0) continue;
      double lo = 0.0, hi = v;
      double x = v / (1.0 + rho / std::hypot(v, beta_));  // one Newton from v
      if (!(x > lo && x < hi)) x = 0.5 * v;
      bool converged = false;
      for (int it = 0; it < 100; ++it) {
        double g = rho * std::asinh(x / beta_) + x - v;
        if (std::abs(g) <= 1e-12 * (1.0 + v)) {
          converged = true;
          break;
        }
        if (g > 0.0) {
          hi = x;
        } else {
          lo = x;
        }
        double gprime = rho / std::hypot(x, beta_) + 1.0;
        double next = x - g / gprime;
        x = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
      }
      if (!converged) {
        throw NoConvergence(
            "hypentropic prox root-find exceeded 100 iterations at v = " +
            std::to_string(v) + " (check beta/rho scaling)");
      }
      V(i, j) = x < 0.0 ? 0.0 : x;
    }
  }
}

double HypentropicReg::conjugate_gap_term(const Matrix& X, const Matrix& Xbar,
                                          double rho) const {
  // h*(u) = beta*cosh(u) per entry (the offsets against h's -beta per entry
  // cancel in the gap).
  double total = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      double u = std::max(Xbar(i, j) - X(i, j), 0.0) / rho;
      total += beta_ * std::cosh(u);
    }
  }
  return total;
}

}  // namespace otdr
