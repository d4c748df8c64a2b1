#include "oradmm/quadratic.hpp"

#include <Eigen/LU>

#include <random>

namespace oradmm {

QuadraticProblem::QuadraticProblem(Matrix P, Vector p, Matrix R, Vector r, Matrix A, Matrix B,
                                   Vector b)
    : P_(std::move(P)),
      R_(std::move(R)),
      A_(std::move(A)),
      B_(std::move(B)),
      p_(std::move(p)),
      r_(std::move(r)),
      b_(std::move(b)) {
  const Index n1 = A_.cols();
  const Index n2 = B_.cols();
  const Index m = A_.rows();
  require_dim("P.rows", P_.rows(), n1);
  require_dim("P.cols", P_.cols(), n1);
  require_dim("p", p_.size(), n1);
  require_dim("R.rows", R_.rows(), n2);
  require_dim("R.cols", R_.cols(), n2);
  require_dim("r", r_.size(), n2);
  require_dim("B.rows", B_.rows(), m);
  require_dim("b", b_.size(), m);
}

QuadraticProblem QuadraticProblem::scalar_consensus() {
  return QuadraticProblem(Matrix::Identity(1, 1), Vector::Zero(1), Matrix::Identity(1, 1),
                          Vector::Zero(1), Matrix::Identity(1, 1), -Matrix::Identity(1, 1),
                          Vector::Zero(1));
}

QuadraticProblem QuadraticProblem::random(Index n1, Index n2, Index m, unsigned long long seed) {
  if (n1 > m || n2 > m || m > n1 + n2) {
    throw std::invalid_argument("QuadraticProblem::random: need n1, n2 <= m <= n1 + n2");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
    return out;
  };

  const Matrix GP = gaussian(n1, n1);
  const Matrix GR = gaussian(n2, n2);
  Matrix P = GP * GP.transpose() / static_cast<double>(n1) + 0.1 * Matrix::Identity(n1, n1);
  Matrix R = GR * GR.transpose() / static_cast<double>(n2) + 0.1 * Matrix::Identity(n2, n2);
  Vector p = gaussian(n1, 1);
  Vector r = gaussian(n2, 1);
  // Gaussian tall matrices have full column rank with probability one.
  Matrix A = gaussian(m, n1);
  Matrix B = gaussian(m, n2);
  Vector b = gaussian(m, 1);
  return QuadraticProblem(std::move(P), std::move(p), std::move(R), std::move(r), std::move(A),
                          std::move(B), std::move(b));
}

Dimensions QuadraticProblem::dims() const { return {A_.cols(), B_.cols(), A_.rows()}; }

Vector QuadraticProblem::solve_x(const Vector& y, const Vector& lambda, double beta) const {
  // (P + beta A^T A) x = -p + A^T lambda - beta A^T (B y - b)
  const Matrix lhs = P_ + beta * A_.transpose() * A_;
  const Vector rhs = -p_ + A_.transpose() * (lambda - beta * (B_ * y - b_));
  return lhs.llt().solve(rhs);
}

Vector QuadraticProblem::solve_y(const Vector& x, const Vector& lambda, double beta) const {
  const Matrix lhs = R_ + beta * B_.transpose() * B_;
  const Vector rhs = -r_ + B_.transpose() * (lambda - beta * (A_ * x - b_));
  return lhs.llt().solve(rhs);
}

double QuadraticProblem::objective(const Vector& x, const Vector& y) const {
  return 0.5 * x.dot(P_ * x) + p_.dot(x) + 0.5 * y.dot(R_ * y) + r_.dot(y);
}

double QuadraticProblem::x_stationarity(const Vector& x, const Vector& lambda) const {
  return (P_ * x + p_ - A_.transpose() * lambda).lpNorm<Eigen::Infinity>();
}

double QuadraticProblem::y_stationarity(const Vector& y, const Vector& lambda) const {
  return (R_ * y + r_ - B_.transpose() * lambda).lpNorm<Eigen::Infinity>();
}

Iterate QuadraticProblem::saddle_point() const {
  const Dimensions d = dims();
  const Index n = d.n1 + d.n2 + d.m;
  // [P 0 -A^T; 0 R -B^T; A B 0] [x; y; lambda] = [-p; -r; b]
  Matrix K = Matrix::Zero(n, n);
  K.block(0, 0, d.n1, d.n1) = P_;
  K.block(0, d.n1 + d.n2, d.n1, d.m) = -A_.transpose();
  K.block(d.n1, d.n1, d.n2, d.n2) = R_;
  K.block(d.n1, d.n1 + d.n2, d.n2, d.m) = -B_.transpose();
  K.block(d.n1 + d.n2, 0, d.m, d.n1) = A_;
  K.block(d.n1 + d.n2, d.n1, d.m, d.n2) = B_;
  Vector rhs(n);
  rhs << -p_, -r_, b_;
  const Vector sol = K.fullPivLu().solve(rhs);
  return {sol.head(d.n1), sol.segment(d.n1, d.n2), sol.tail(d.m)};
}

}  // namespace oradmm
