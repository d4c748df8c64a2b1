#pragma once

// Lasso,  min 1/2 |A x - b|^2 + rho |x|_1,  split as x - y = 0 with
// theta1(x) = 1/2 |A x - b|^2 and theta2(y) = rho |y|_1. The multiplier z
// enters the augmented Lagrangian as -z^T (x - y).

#include "oradmm/problem.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <memory>
#include <mutex>

namespace oradmm {

/// Elementwise (a - kappa)_+ - (-a - kappa)_+.
Vector soft_threshold(const Vector& a, double kappa);
double soft_threshold(double a, double kappa);

/// |A^T b|_inf: the smallest rho at which x = 0 solves the Lasso.
double rho_max(const Matrix& A, const Vector& b);

class LassoInstance final : public ConsensusProblem {
 public:
  LassoInstance(Matrix A, Vector b, double rho, std::uint64_t seed = 0);
  ~LassoInstance() override;

  LassoInstance(LassoInstance&&) noexcept;
  LassoInstance& operator=(LassoInstance&&) noexcept;
  LassoInstance(const LassoInstance&) = delete;
  LassoInstance& operator=(const LassoInstance&) = delete;

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double rho() const { return rho_; }
  std::uint64_t seed() const { return seed_; }
  Index rows() const { return A_.rows(); }
  Index cols() const { return A_.cols(); }

  /// Exact minimizer of 1/2|Ax-b|^2 - z^T x + beta/2 |x - y|^2:
  ///   (A^T A + beta I) x = A^T b + beta y + z.
  /// Uses the Woodbury path when m < n, the direct path otherwise.
  Vector x_update(const Vector& y, const Vector& z, double beta) const;
  /// Cholesky of A^T A + beta I (n x n).
  Vector x_update_direct(const Vector& y, const Vector& z, double beta) const;
  /// (A^T A + beta I)^{-1} = (1/beta)(I - A^T (beta I + A A^T)^{-1} A), with
  /// beta I + A A^T (m x m) factorized once per beta.
  Vector x_update_woodbury(const Vector& y, const Vector& z, double beta) const;

  /// Exact minimizer of rho|y|_1 + z^T y + beta/2 |x - y|^2:
  ///   S_{rho/beta}(x - z/beta).
  Vector y_update(const Vector& x_next, const Vector& z, double beta) const;

  /// 1/2 |A x - b|^2 + rho |x|_1.
  double lasso_objective(const Vector& x) const;

  Vector solve_x(const Vector& y, const Vector& lambda, double beta) const override {
    return x_update(y, lambda, beta);
  }
  Vector solve_y(const Vector& x, const Vector& lambda, double beta) const override {
    return y_update(x, lambda, beta);
  }
  /// 1/2 |A x - b|^2 + rho |y|_1.
  double objective(const Vector& x, const Vector& y) const override;
  double x_stationarity(const Vector& x, const Vector& lambda) const override;
  double y_stationarity(const Vector& y, const Vector& lambda) const override;

 private:
  struct FactorCache;

  std::shared_ptr<const Eigen::LLT<Matrix>> factor(bool woodbury, double beta) const;

  Matrix A_;
  Vector b_;
  Vector Atb_;
  double rho_;
  std::uint64_t seed_;
  std::unique_ptr<FactorCache> cache_;
};

struct GeneratedLasso {
  LassoInstance instance;
  Vector x_true;
  Vector noise;
};

/// Gaussian design with unit-norm columns, x_true with min(100, n/10) N(0,1)
/// nonzeros at uniformly random positions, b = A x_true + v with
/// v ~ N(0, 1e-3 I), and rho = rho_fraction * rho_max. Deterministic in seed.
GeneratedLasso generate_lasso(Index m, Index n, std::uint64_t seed, double rho_fraction = 0.1);

/// min(100, floor(n / 10)), at least 1.
Index lasso_nonzero_count(Index n);

}  // namespace oradmm
