#pragma once

// Sparse inverse covariance selection,
//
//   min  Tr(S X) - log det X + tau |X|_1   over symmetric positive definite X,
//
// split as X - Y = 0. Matrices are flattened column-major into length n^2
// vectors at the engine boundary, so Frobenius inner products become plain
// dot products and B = -I.

#include "oradmm/problem.hpp"

#include <cstdint>

namespace oradmm {

class CovselInstance final : public ConsensusProblem {
 public:
  /// Throws if S is not square, not exactly symmetric, or has an eigenvalue
  /// below -1e-10.
  CovselInstance(Matrix S, double tau, std::uint64_t seed = 0);

  const Matrix& S() const { return S_; }
  double tau() const { return tau_; }
  Index size() const { return S_.rows(); }
  std::uint64_t seed() const { return seed_; }

  /// Minimizer of Tr(S X) - log det X - <Lambda, X> + beta/2 |X - Y|_F^2.
  /// With R = beta Y + Lambda - S = U diag(d) U^T, X = U diag(x) U^T where
  /// x_i = (d_i + sqrt(d_i^2 + 4 beta)) / (2 beta).
  Matrix x_update(const Matrix& Y, const Matrix& Lambda, double beta) const;
  /// Elementwise S_{tau/beta}(X - Lambda / beta).
  Matrix y_update(const Matrix& X_next, const Matrix& Lambda, double beta) const;

  /// Tr(S X) - log det X + tau |X|_1; +inf when X is not positive definite.
  double covsel_objective(const Matrix& X) const;

  Vector solve_x(const Vector& y, const Vector& lambda, double beta) const override;
  Vector solve_y(const Vector& x, const Vector& lambda, double beta) const override;
  /// Tr(S X) - log det X + tau |Y|_1.
  double objective(const Vector& x, const Vector& y) const override;
  /// max |S - X^{-1} - Lambda|; +inf when X is not positive definite.
  double x_stationarity(const Vector& x, const Vector& lambda) const override;
  double y_stationarity(const Vector& y, const Vector& lambda) const override;

  Vector flatten(const Matrix& X) const;
  Matrix unflatten(const Vector& v) const;

 private:
  Matrix S_;
  double tau_;
  std::uint64_t seed_;
};

/// Positive root of beta x - 1/x = d.
double covsel_eigen_map(double d, double beta);

struct GeneratedCovsel {
  CovselInstance instance;
  Matrix precision_true;
  Index samples = 0;
};

inline constexpr double kDefaultCovselTau = 0.1;

/// ceil(0.01 n^2).
Index covsel_sample_count(Index n);

/// Ground truth precision: identity plus roughly 10% symmetric off-diagonal
/// entries drawn from {-0.2, 0.2}, diagonally shifted so its smallest
/// eigenvalue is at least 0.1. Draws covsel_sample_count(n) samples from
/// N(0, precision^{-1}) and returns their empirical covariance. Requires n >= 10.
GeneratedCovsel generate_covsel(Index n, std::uint64_t seed, double tau = kDefaultCovselTau);

}  // namespace oradmm
