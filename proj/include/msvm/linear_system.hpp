#pragma once

#include "msvm/types.hpp"

#include <Eigen/Cholesky>

#include <utility>

namespace msvm {

// Closed-form handling of the sum-to-zero parameterization W = What P^T,
// b = P bhat, with P = [I; -e^T] of size J x (J-1) and
// G = P (P^T P)^{-1} = [I; 0] - E / J. P^T G = I.
struct ReducedBasis {
  int num_classes;

  explicit ReducedBasis(int num_classes_) : num_classes(num_classes_) {
    if (num_classes < 2) throw std::invalid_argument("need at least two classes");
  }

  // m (k x J) -> m G (k x (J-1)): column j of m minus the row-means of m.
  Matrix reduce_columns(const Matrix& m) const {
    if (m.cols() != num_classes)
      throw std::invalid_argument("reduce_columns: column count must equal the class count");
    const Vector row_means = m.rowwise().mean();
    Matrix out = m.leftCols(num_classes - 1);
    out.colwise() -= row_means;
    return out;
  }

  // (What, bhat) -> (W, b): the last class is filled so W e = 0 and e^T b = 0
  // hold by construction.
  std::pair<Matrix, Vector> lift(const Matrix& w_hat, const Vector& b_hat) const {
    if (w_hat.cols() != num_classes - 1 || b_hat.size() != num_classes - 1)
      throw std::invalid_argument("lift: inputs must have J - 1 columns/components");
    Matrix w(w_hat.rows(), num_classes);
    w.leftCols(num_classes - 1) = w_hat;
    w.col(num_classes - 1) = -w_hat.rowwise().sum();
    Vector b(num_classes);
    b.head(num_classes - 1) = b_hat;
    b[num_classes - 1] = -b_hat.sum();
    return {std::move(w), std::move(b)};
  }

  Matrix p_matrix() const {
    Matrix p = Matrix::Zero(num_classes, num_classes - 1);
    p.topRows(num_classes - 1).setIdentity();
    p.row(num_classes - 1).setConstant(-1.0);
    return p;
  }

  Matrix g_matrix() const {
    Matrix g = Matrix::Zero(num_classes, num_classes - 1);
    g.topRows(num_classes - 1).setIdentity();
    g.array() -= 1.0 / static_cast<double>(num_classes);
    return g;
  }
};

enum class SolveStrategy { Auto, Direct, Woodbury };

// Reusable factorization of M = D + alpha Z Z^T with D = diag(c I_p, lambda3)
// and Z = [X; e^T]: the normal matrix of the (W, b) subproblem. Direct factors
// the dense (p+1) x (p+1) matrix; Woodbury factors the n x n capacitance
// I + alpha Z^T D^{-1} Z instead, which wins whenever n < p. The matrix only
// depends on X and the penalty parameters, so one factor serves a whole run.
class SystemFactor {
 public:
  SystemFactor(const Matrix& x, double alpha, double diag_top, double lambda3,
               SolveStrategy hint = SolveStrategy::Auto)
      : alpha_(alpha), diag_top_(diag_top), lambda3_(lambda3), p_(x.rows()), n_(x.cols()) {
    if (alpha <= 0 || diag_top <= 0 || lambda3 <= 0)
      throw std::invalid_argument("SystemFactor parameters must be positive");
    strategy_ = hint == SolveStrategy::Auto
                    ? (n_ < p_ ? SolveStrategy::Woodbury : SolveStrategy::Direct)
                    : hint;
    if (strategy_ == SolveStrategy::Woodbury) {
      x_ = x;
      Matrix capacitance = (alpha / diag_top) * (x.transpose() * x);
      capacitance.array() += alpha / lambda3;  // alpha e e^T / lambda3
      capacitance.diagonal().array() += 1.0;
      llt_.compute(capacitance);
    } else {
      Matrix m(p_ + 1, p_ + 1);
      m.topLeftCorner(p_, p_) = alpha * (x * x.transpose());
      m.topLeftCorner(p_, p_).diagonal().array() += diag_top;
      m.topRightCorner(p_, 1) = alpha * x.rowwise().sum();
      m.bottomLeftCorner(1, p_) = m.topRightCorner(p_, 1).transpose();
      m(p_, p_) = static_cast<double>(n_) * alpha + lambda3;
      llt_.compute(m);
    }
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("SystemFactor: Cholesky factorization failed");
  }

  // Solve M s = rhs for all columns of rhs ((p+1) x k) at once.
  Matrix solve(const Matrix& rhs) const {
    if (rhs.rows() != p_ + 1)
      throw std::invalid_argument("SystemFactor::solve: rhs must have p + 1 rows");
    if (strategy_ == SolveStrategy::Direct) return llt_.solve(rhs);
    // M^{-1} r = D^{-1} r - alpha D^{-1} Z C^{-1} Z^T D^{-1} r
    Matrix dinv_rhs = rhs;
    dinv_rhs.topRows(p_) /= diag_top_;
    dinv_rhs.row(p_) /= lambda3_;
    const Matrix small_rhs =
        x_.transpose() * dinv_rhs.topRows(p_) + Vector::Ones(n_) * dinv_rhs.row(p_);
    const Matrix correction = llt_.solve(small_rhs);
    Matrix update(p_ + 1, rhs.cols());
    update.topRows(p_) = (alpha_ / diag_top_) * (x_ * correction);
    update.row(p_) = (alpha_ / lambda3_) * correction.colwise().sum();
    return dinv_rhs - update;
  }

  SolveStrategy strategy() const { return strategy_; }
  double alpha() const { return alpha_; }
  double diag_top() const { return diag_top_; }
  double lambda3() const { return lambda3_; }
  Index p() const { return p_; }
  Index n() const { return n_; }

 private:
  Matrix x_;  // kept only for Woodbury solves
  double alpha_, diag_top_, lambda3_;
  Index p_, n_;
  SolveStrategy strategy_ = SolveStrategy::Direct;
  Eigen::LLT<Matrix> llt_;
};

}  // namespace msvm
