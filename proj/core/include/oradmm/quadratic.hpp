#pragma once

#include "oradmm/problem.hpp"

#include <Eigen/Cholesky>

namespace oradmm {

/// Dense strongly convex quadratic instance
///
///   theta1(x) = 1/2 x^T P x + p^T x,   theta2(y) = 1/2 y^T R y + r^T y
///
/// with general dense A, B, b. Small enough to materialize everything; used
/// for the algebraic identity checks and as a worked example of the contract.
class QuadraticProblem final : public SeparableProblem {
 public:
  QuadraticProblem(Matrix P, Vector p, Matrix R, Vector r, Matrix A, Matrix B, Vector b);

  /// min 1/2 x^2 + 1/2 y^2  s.t.  x - y = 0.
  static QuadraticProblem scalar_consensus();

  /// Random instance with P, R positive definite and B of full column rank.
  /// Requires n1, n2 <= m <= n1 + n2 so the constraint is feasible.
  static QuadraticProblem random(Index n1, Index n2, Index m, unsigned long long seed);

  Dimensions dims() const override;

  Vector solve_x(const Vector& y, const Vector& lambda, double beta) const override;
  Vector solve_y(const Vector& x, const Vector& lambda, double beta) const override;

  Vector apply_A(const Vector& x) const override { return A_ * x; }
  Vector apply_B(const Vector& y) const override { return B_ * y; }
  Vector apply_At(const Vector& v) const override { return A_.transpose() * v; }
  Vector apply_Bt(const Vector& v) const override { return B_.transpose() * v; }
  const Vector& rhs() const override { return b_; }

  double objective(const Vector& x, const Vector& y) const override;
  double x_stationarity(const Vector& x, const Vector& lambda) const override;
  double y_stationarity(const Vector& y, const Vector& lambda) const override;

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }

  /// The unique saddle point, from the dense KKT system.
  Iterate saddle_point() const;

 private:
  Matrix P_, R_, A_, B_;
  Vector p_, r_, b_;
};

}  // namespace oradmm
