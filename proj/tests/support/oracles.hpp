#pragma once

// Reference computations that share no code path with the library.

#include <Eigen/Core>

#include <cstdint>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// argmin_t 1/2 (t - a)^2 + kappa |t| by exhaustive search over a uniform
/// grid of spacing `step` on [lo, hi].
double grid_prox_l1(double a, double kappa, double step = 1e-4, double lo = -10.0,
                    double hi = 10.0);

/// Positive root of beta x - 1/x = d by bisection, run until the bracket
/// stops shrinking.
double scalar_root(double d, double beta);

/// Closed-form minimizers of the 1-D instance 1/2 x^2 + 1/2 y^2, x - y = 0.
struct ScalarStep {
  double x_next;
  double y_hat;
  double lambda_hat;
  double lambda_tilde;
};
ScalarStep scalar_predict(double y, double lambda, double beta);

/// (A^T A + beta I)^{-1} (A^T b + beta y + z) via full-pivot LU of the n x n system.
Vector lasso_x_dense(const Matrix& A, const Vector& b, const Vector& y, const Vector& z,
                     double beta);

/// M and Q written out entry by entry for a given B.
Matrix matrix_M(const Matrix& B, double beta, double gamma);
Matrix matrix_Q(const Matrix& B, double beta);

/// Random matrix with i.i.d. standard normal entries.
Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// Random symmetric matrix.
Matrix symmetric(Eigen::Index n, std::uint64_t seed);

/// |a - b| / max(1, |b|).
double rel_diff(const Vector& a, const Vector& b);

}  // namespace oracle
