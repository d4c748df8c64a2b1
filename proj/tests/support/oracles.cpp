#include "oracles.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

double grid_prox_l1(double a, double kappa, double step, double lo, double hi) {
  const long count = std::lround((hi - lo) / step);
  double best_t = lo;
  double best_f = INFINITY;
  for (long i = 0; i <= count; ++i) {
    const double t = lo + static_cast<double>(i) * step;
    const double f = 0.5 * (t - a) * (t - a) + kappa * std::abs(t);
    if (f < best_f) {
      best_f = f;
      best_t = t;
    }
  }
  return best_t;
}

double scalar_root(double d, double beta) {
  // f(x) = beta x - 1/x is increasing on (0, inf).
  auto f = [&](double x) { return beta * x - 1.0 / x - d; };
  double lo = 1e-300;
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  while (f(lo) > 0.0) lo /= 2.0;
  for (int i = 0; i < 5000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

ScalarStep scalar_predict(double y, double lambda, double beta) {
  // x: x - lambda + beta (x - y) = 0;  y: y + lambda - beta (x - y) = 0.
  ScalarStep s{};
  s.x_next = (lambda + beta * y) / (1.0 + beta);
  s.y_hat = (beta * s.x_next - lambda) / (1.0 + beta);
  s.lambda_hat = lambda - beta * (s.x_next - s.y_hat);
  s.lambda_tilde = lambda - beta * (s.x_next - y);
  return s;
}

Vector lasso_x_dense(const Matrix& A, const Vector& b, const Vector& y, const Vector& z,
                     double beta) {
  const Eigen::Index n = A.cols();
  const Matrix K = A.transpose() * A + beta * Matrix::Identity(n, n);
  const Vector rhs = A.transpose() * b + beta * y + z;
  return K.fullPivLu().solve(rhs);
}

Matrix matrix_M(const Matrix& B, double beta, double gamma) {
  const Eigen::Index n2 = B.cols();
  const Eigen::Index m = B.rows();
  Matrix M = Matrix::Zero(n2 + m, n2 + m);
  M.topLeftCorner(n2, n2) = gamma * Matrix::Identity(n2, n2);
  M.bottomLeftCorner(m, n2) = -gamma * beta * B;
  M.bottomRightCorner(m, m) = gamma * Matrix::Identity(m, m);
  return M;
}

Matrix matrix_Q(const Matrix& B, double beta) {
  const Eigen::Index n2 = B.cols();
  const Eigen::Index m = B.rows();
  Matrix Q = Matrix::Zero(n2 + m, n2 + m);
  Q.topLeftCorner(n2, n2) = beta * B.transpose() * B;
  Q.bottomLeftCorner(m, n2) = -B;
  Q.bottomRightCorner(m, m) = Matrix::Identity(m, m) / beta;
  return Q;
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = normal(rng);
  return X;
}

Matrix symmetric(Eigen::Index n, std::uint64_t seed) {
  const Matrix G = gaussian(n, n, seed);
  return 0.5 * (G + G.transpose());
}

double rel_diff(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace oracle
