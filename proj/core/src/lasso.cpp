#include "oradmm/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oradmm {

double soft_threshold(double a, double kappa) {
  return std::max(a - kappa, 0.0) - std::max(-a - kappa, 0.0);
}

Vector soft_threshold(const Vector& a, double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("soft_threshold: kappa must be non-negative");
  return a.unaryExpr([kappa](double v) { return soft_threshold(v, kappa); });
}

double rho_max(const Matrix& A, const Vector& b) {
  require_dim("b", b.size(), A.rows());
  if (A.cols() == 0) return 0.0;
  return (A.transpose() * b).lpNorm<Eigen::Infinity>();
}

// Guarded so concurrent solves on one instance can share it. One slot per path.
struct LassoInstance::FactorCache {
  struct Slot {
    double beta = 0.0;
    std::shared_ptr<const Eigen::LLT<Matrix>> llt;
  };
  std::mutex mutex;
  Slot direct;
  Slot woodbury;
};

LassoInstance::LassoInstance(Matrix A, Vector b, double rho, std::uint64_t seed)
    : ConsensusProblem(A.cols()),
      A_(std::move(A)),
      b_(std::move(b)),
      rho_(rho),
      seed_(seed),
      cache_(std::make_unique<FactorCache>()) {
  require_dim("b", b_.size(), A_.rows());
  if (!(rho_ > 0.0)) throw std::invalid_argument("lasso: rho must be positive");
  Atb_ = A_.transpose() * b_;
}

LassoInstance::~LassoInstance() = default;
LassoInstance::LassoInstance(LassoInstance&&) noexcept = default;
LassoInstance& LassoInstance::operator=(LassoInstance&&) noexcept = default;

std::shared_ptr<const Eigen::LLT<Matrix>> LassoInstance::factor(bool woodbury, double beta) const {
  if (!(beta > 0.0)) throw std::invalid_argument("lasso: beta must be positive");
  std::lock_guard lock(cache_->mutex);
  FactorCache::Slot& slot = woodbury ? cache_->woodbury : cache_->direct;
  if (!slot.llt || slot.beta != beta) {
    Matrix gram = woodbury ? Matrix(A_ * A_.transpose()) : Matrix(A_.transpose() * A_);
    gram.diagonal().array() += beta;
    auto llt = std::make_shared<const Eigen::LLT<Matrix>>(gram);
    if (llt->info() != Eigen::Success) {
      throw std::runtime_error("lasso: Cholesky factorization failed");
    }
    slot.llt = std::move(llt);
    slot.beta = beta;
  }
  return slot.llt;
}

Vector LassoInstance::x_update(const Vector& y, const Vector& z, double beta) const {
  return rows() < cols() ? x_update_woodbury(y, z, beta) : x_update_direct(y, z, beta);
}

Vector LassoInstance::x_update_direct(const Vector& y, const Vector& z, double beta) const {
  require_dim("y", y.size(), cols());
  require_dim("z", z.size(), cols());
  const Vector q = Atb_ + beta * y + z;
  return factor(false, beta)->solve(q);
}

Vector LassoInstance::x_update_woodbury(const Vector& y, const Vector& z, double beta) const {
  require_dim("y", y.size(), cols());
  require_dim("z", z.size(), cols());
  const Vector q = Atb_ + beta * y + z;
  const Vector inner = factor(true, beta)->solve(A_ * q);
  return (q - A_.transpose() * inner) / beta;
}

Vector LassoInstance::y_update(const Vector& x_next, const Vector& z, double beta) const {
  require_dim("x", x_next.size(), cols());
  require_dim("z", z.size(), cols());
  if (!(beta > 0.0)) throw std::invalid_argument("lasso: beta must be positive");
  return soft_threshold(x_next - z / beta, rho_ / beta);
}

double LassoInstance::lasso_objective(const Vector& x) const {
  return 0.5 * (A_ * x - b_).squaredNorm() + rho_ * x.lpNorm<1>();
}

double LassoInstance::objective(const Vector& x, const Vector& y) const {
  return 0.5 * (A_ * x - b_).squaredNorm() + rho_ * y.lpNorm<1>();
}

double LassoInstance::x_stationarity(const Vector& x, const Vector& lambda) const {
  // grad theta1(x) - A_cons^T lambda = A^T (A x - b) - lambda
  return (A_.transpose() * (A_ * x) - Atb_ - lambda).lpNorm<Eigen::Infinity>();
}

double LassoInstance::y_stationarity(const Vector& y, const Vector& lambda) const {
  // 0 in rho d|y|_1 - B_cons^T lambda = rho d|y|_1 + lambda
  double worst = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double d = y[i] != 0.0 ? std::abs(rho_ * (y[i] > 0.0 ? 1.0 : -1.0) + lambda[i])
                                 : std::max(0.0, std::abs(lambda[i]) - rho_);
    worst = std::max(worst, d);
  }
  return worst;
}

Index lasso_nonzero_count(Index n) { return std::max<Index>(1, std::min<Index>(100, n / 10)); }

GeneratedLasso generate_lasso(Index m, Index n, std::uint64_t seed, double rho_fraction) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("generate_lasso: m and n must be positive");
  if (!(rho_fraction > 0.0)) throw std::invalid_argument("generate_lasso: rho_fraction > 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix A(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) A(i, j) = normal(rng);
    A.col(j).normalize();
  }

  std::vector<Index> positions(static_cast<std::size_t>(n));
  std::iota(positions.begin(), positions.end(), Index{0});
  const Index nnz = std::min(lasso_nonzero_count(n), n);
  // Partial Fisher-Yates: the first nnz slots are a uniform sample.
  for (Index i = 0; i < nnz; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(positions[static_cast<std::size_t>(i)],
              positions[static_cast<std::size_t>(pick(rng))]);
  }
  Vector x_true = Vector::Zero(n);
  for (Index i = 0; i < nnz; ++i) x_true[positions[static_cast<std::size_t>(i)]] = normal(rng);

  const double noise_sd = std::sqrt(1e-3);
  Vector noise(m);
  for (Index i = 0; i < m; ++i) noise[i] = noise_sd * normal(rng);

  Vector b = A * x_true + noise;
  const double rho = rho_fraction * rho_max(A, b);
  return {LassoInstance(std::move(A), std::move(b), rho, seed), std::move(x_true),
          std::move(noise)};
}

}  // namespace oradmm
