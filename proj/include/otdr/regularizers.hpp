#pragma once

#include <memory>
#include <string>
#include <vector>

#include "otdr/groups.hpp"
#include "otdr/types.hpp"

namespace otdr {

/* Sparsity-promoting regularizers.
 *
 * A regularizer h is sparsity promoting when zeroing any subset of entries of
 * X never increases h(X). Each instance supplies:
 *
 *   value(X)                h(X); +inf is a legal value (forbidden entries)
 *   prox(V, rho)            argmin_Z h(Z) + (1/2rho)||Z - V||_F^2 for V >= 0;
 *                           preserves zeros and non-negativity of V exactly
 *   conjugate_gap_term      h*(U) with U = [Xbar - X]_+ / rho, the term that
 *                           closes the duality gap at a fixed point
 *   dual_residual           norm of the dual-feasibility violation; 0 for
 *                           smooth h whose conjugate is finite everywhere
 *
 * Xbar denotes [X + phi 1^T + 1 psi^T - rho C]_+, the pre-prox iterate; the
 * identity [phi 1^T + 1 psi^T - rho C]_+ = [Xbar - X]_+ (valid since X >= 0)
 * lets both diagnostics work from solver state alone.
 */
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual std::string name() const = 0;
  virtual double value(const Matrix& X) const = 0;
  virtual void prox_in_place(Matrix& V, double rho) const = 0;

  Matrix prox(Matrix V, double rho) const {
    prox_in_place(V, rho);
    return V;
  }

  // Default 0: indicator/norm-type conjugates contribute through the dual
  // residual instead. Smooth instances override.
  virtual double conjugate_gap_term(const Matrix& X, const Matrix& Xbar,
                                    double rho) const;

  // Default ||prox_h([Xbar - X]_+, rho=1)||_F: distance past the dual-feasible
  // set for indicator/norm-type h (identity for h = 0, block/entry
  // soft-threshold at lambda for norms, mask for forbidden entries).
  // Smooth instances override to 0.
  virtual double dual_residual(const Matrix& X, const Matrix& Xbar,
                               double rho) const;
};

// h = 0.
class ZeroReg final : public Regularizer {
 public:
  std::string name() const override { return "none"; }
  double value(const Matrix&) const override { return 0.0; }
  void prox_in_place(Matrix&, double) const override {}
};

// h(X) = (alpha/2) ||X||_F^2.
class QuadraticReg final : public Regularizer {
 public:
  explicit QuadraticReg(double alpha);
  double alpha() const { return alpha_; }
  std::string name() const override;
  double value(const Matrix& X) const override;
  void prox_in_place(Matrix& V, double rho) const override;
  double conjugate_gap_term(const Matrix& X, const Matrix& Xbar,
                            double rho) const override;
  double dual_residual(const Matrix&, const Matrix&, double) const override {
    return 0.0;
  }

 private:
  double alpha_;
};

// h(X) = lambda * sum_g ||X_g||_F over disjoint groups. The prox is the block
// soft-threshold with threshold rho*lambda (the prox of rho*lambda*||.||;
// absorbing rho into lambda would change the iteration's fixed points).
class GroupLassoReg final : public Regularizer {
 public:
  GroupLassoReg(double lambda, GroupPartition partition);
  double lambda() const { return lambda_; }
  const GroupPartition& partition() const { return partition_; }
  std::string name() const override;
  double value(const Matrix& X) const override;
  void prox_in_place(Matrix& V, double rho) const override;

 private:
  double lambda_;
  GroupPartition partition_;
};

// h(X) = sum_ij w_ij |X_ij| with w >= 0; on the solver's non-negative iterates
// the prox is the one-sided soft-threshold max(v - rho*w, 0).
class WeightedL1Reg final : public Regularizer {
 public:
  explicit WeightedL1Reg(Matrix weights);
  const Matrix& weights() const { return weights_; }
  std::string name() const override { return "wl1"; }
  double value(const Matrix& X) const override;
  void prox_in_place(Matrix& V, double rho) const override;

 private:
  Matrix weights_;
};

// Indicator of {X : X_ij = 0 for (i,j) in S}. Sparsity promoting since
// zeroing entries can only help satisfy the constraint; an infeasible S
// (e.g. a whole row of positive mass forced to 0) makes the solver stall by
// design rather than error out.
class ForbiddenReg final : public Regularizer {
 public:
  ForbiddenReg(Index rows, Index cols,
               std::vector<std::pair<Index, Index>> forbidden);
  const std::vector<std::pair<Index, Index>>& forbidden() const {
    return cells_;
  }
  std::string name() const override { return "forbid"; }
  double value(const Matrix& X) const override;
  void prox_in_place(Matrix& V, double rho) const override;

 private:
  Index rows_, cols_;
  std::vector<std::pair<Index, Index>> cells_;
};

// h(X) = sum_ij x arcsinh(x/beta) - sqrt(x^2 + beta^2), a smooth sparsity
// promoter with h'(x) = arcsinh(x/beta). The prox solves the scalar
// stationarity condition rho*arcsinh(x/beta) + x - v = 0 per entry by
// safeguarded Newton on [0, v].
class HypentropicReg final : public Regularizer {
 public:
  explicit HypentropicReg(double beta);
  double beta() const { return beta_; }
  std::string name() const override;
  double value(const Matrix& X) const override;
  void prox_in_place(Matrix& V, double rho) const override;
  double conjugate_gap_term(const Matrix& X, const Matrix& Xbar,
                            double rho) const override;
  double dual_residual(const Matrix&, const Matrix&, double) const override {
    return 0.0;
  }

 private:
  double beta_;
};

}  // namespace otdr
