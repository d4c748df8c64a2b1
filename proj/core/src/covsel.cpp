#include "oradmm/covsel.hpp"

#include "oradmm/lasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oradmm {

namespace {

double elementwise_l1(const Matrix& X) { return X.cwiseAbs().sum(); }

}  // namespace

double covsel_eigen_map(double d, double beta) {
  // Written to avoid cancellation for large negative d.
  const double root = std::sqrt(d * d + 4.0 * beta);
  return d >= 0.0 ? (d + root) / (2.0 * beta) : 2.0 / (root - d);
}

CovselInstance::CovselInstance(Matrix S, double tau, std::uint64_t seed)
    : ConsensusProblem(S.rows() * S.rows()), S_(std::move(S)), tau_(tau), seed_(seed) {
  require_dim("S.cols", S_.cols(), S_.rows());
  if (tau_ < 0.0) throw std::invalid_argument("covsel: tau must be non-negative");
  if ((S_ - S_.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("covsel: S must be symmetric");
  }
  if (S_.rows() > 0) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(S_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("covsel: S must be positive semidefinite");
    }
  }
}

Vector CovselInstance::flatten(const Matrix& X) const {
  require_dim("X.rows", X.rows(), size());
  require_dim("X.cols", X.cols(), size());
  return Eigen::Map<const Vector>(X.data(), X.size());
}

Matrix CovselInstance::unflatten(const Vector& v) const {
  require_dim("flattened matrix", v.size(), size() * size());
  return Eigen::Map<const Matrix>(v.data(), size(), size());
}

Matrix CovselInstance::x_update(const Matrix& Y, const Matrix& Lambda, double beta) const {
  if (!(beta > 0.0)) throw std::invalid_argument("covsel: beta must be positive");
  require_dim("Y", Y.rows(), size());
  require_dim("Lambda", Lambda.rows(), size());
  Matrix R = beta * Y + Lambda - S_;
  R = 0.5 * (R + R.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(R);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("covsel: eigendecomposition failed");
  }
  const Vector x = eig.eigenvalues().unaryExpr([beta](double d) {
    return covsel_eigen_map(d, beta);
  });
  const Matrix& U = eig.eigenvectors();
  Matrix X = U * x.asDiagonal() * U.transpose();
  return 0.5 * (X + X.transpose());
}

Matrix CovselInstance::y_update(const Matrix& X_next, const Matrix& Lambda, double beta) const {
  if (!(beta > 0.0)) throw std::invalid_argument("covsel: beta must be positive");
  require_dim("X", X_next.rows(), size());
  require_dim("Lambda", Lambda.rows(), size());
  const double kappa = tau_ / beta;
  Matrix Y = (X_next - Lambda / beta).unaryExpr([kappa](double a) {
    return soft_threshold(a, kappa);
  });
  return 0.5 * (Y + Y.transpose());
}

double CovselInstance::covsel_objective(const Matrix& X) const {
  const Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return (S_.cwiseProduct(X)).sum() - logdet + tau_ * elementwise_l1(X);
}

Vector CovselInstance::solve_x(const Vector& y, const Vector& lambda, double beta) const {
  return flatten(x_update(unflatten(y), unflatten(lambda), beta));
}

Vector CovselInstance::solve_y(const Vector& x, const Vector& lambda, double beta) const {
  return flatten(y_update(unflatten(x), unflatten(lambda), beta));
}

double CovselInstance::objective(const Vector& x, const Vector& y) const {
  const Matrix X = unflatten(x);
  const Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return (S_.cwiseProduct(X)).sum() - logdet + tau_ * y.lpNorm<1>();
}

double CovselInstance::x_stationarity(const Vector& x, const Vector& lambda) const {
  const Matrix X = unflatten(x);
  const Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Matrix Xinv = llt.solve(Matrix::Identity(size(), size()));
  return (S_ - Xinv - unflatten(lambda)).cwiseAbs().maxCoeff();
}

double CovselInstance::y_stationarity(const Vector& y, const Vector& lambda) const {
  double worst = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double d = y[i] != 0.0 ? std::abs(tau_ * (y[i] > 0.0 ? 1.0 : -1.0) + lambda[i])
                                 : std::max(0.0, std::abs(lambda[i]) - tau_);
    worst = std::max(worst, d);
  }
  return worst;
}

Index covsel_sample_count(Index n) {
  // Integer form of ceil(0.01 n^2).
  return (n * n + 99) / 100;
}

GeneratedCovsel generate_covsel(Index n, std::uint64_t seed, double tau) {
  if (n < 10) throw std::invalid_argument("generate_covsel: n must be at least 10");

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(0.1);
  std::bernoulli_distribution positive(0.5);

  Matrix P = Matrix::Identity(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (keep(rng)) {
        const double v = positive(rng) ? 0.2 : -0.2;
        P(i, j) = v;
        P(j, i) = v;
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(P, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmin < 0.1) P.diagonal().array() += 0.1 - lmin;

  // With P = L L^T, a = L^{-T} z has covariance P^{-1}.
  const Eigen::LLT<Matrix> llt(P);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("generate_covsel: precision matrix not positive definite");
  }
  const Index N = covsel_sample_count(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix Z(n, N);
  for (Index j = 0; j < N; ++j)
    for (Index i = 0; i < n; ++i) Z(i, j) = normal(rng);
  const Matrix samples = llt.matrixU().solve(Z);

  Matrix S = samples * samples.transpose() / static_cast<double>(N);
  S = 0.5 * (S + S.transpose()).eval();
  return {CovselInstance(std::move(S), tau, seed), std::move(P), N};
}

}  // namespace oradmm
