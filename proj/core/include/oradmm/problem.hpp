#pragma once

// Two-block separable convex programs
//
//   min  theta1(x) + theta2(y)   s.t.  A x + B y = b
//
// and the value types shared by every solver variant.

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oradmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when an operand does not have the dimension its role requires.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string_view operand, Index got, Index expected);

  const std::string& operand() const noexcept { return operand_; }

 private:
  std::string operand_;
};

/// Throws DimensionError unless `got == expected`.
void require_dim(std::string_view operand, Index got, Index expected);

struct Dimensions {
  Index n1 = 0;  // x
  Index n2 = 0;  // y
  Index m = 0;   // constraint rows
};

/// Full point w = (x, y, lambda).
struct Iterate {
  Vector x;
  Vector y;
  Vector lambda;

  void validate(const Dimensions& dims) const;
};

/// The part of the iterate the ADMM recursion actually carries: v = (y, lambda).
struct EssentialState {
  Vector y;
  Vector lambda;

  static EssentialState zeros(const Dimensions& dims);

  void validate(const Dimensions& dims) const;
  bool all_finite() const;
};

/// Behavioral contract for a problem instance.
///
/// solve_x and solve_y return exact minimizers of
///   theta1(x) - x^T A^T lambda + beta/2 |A x + B y - b|^2     (over x)
///   theta2(y) - y^T B^T lambda + beta/2 |A x + B y - b|^2     (over y)
/// Instances are immutable once built and may be shared across threads.
class SeparableProblem {
 public:
  virtual ~SeparableProblem() = default;

  virtual Dimensions dims() const = 0;

  virtual Vector solve_x(const Vector& y, const Vector& lambda, double beta) const = 0;
  virtual Vector solve_y(const Vector& x, const Vector& lambda, double beta) const = 0;

  virtual Vector apply_A(const Vector& x) const = 0;
  virtual Vector apply_B(const Vector& y) const = 0;
  virtual Vector apply_At(const Vector& r) const = 0;
  virtual Vector apply_Bt(const Vector& r) const = 0;
  virtual const Vector& rhs() const = 0;

  virtual double objective(const Vector& x, const Vector& y) const = 0;

  /// Infinity-norm distance of 0 from d theta1(x) - A^T lambda.
  virtual double x_stationarity(const Vector& x, const Vector& lambda) const = 0;
  /// Infinity-norm distance of 0 from d theta2(y) - B^T lambda.
  virtual double y_stationarity(const Vector& y, const Vector& lambda) const = 0;

  /// A x + B y - b.
  Vector constraint_residual(const Vector& x, const Vector& y) const;

  /// B materialized column by column. Only sensible for small n2.
  Matrix dense_B() const;
};

/// Problems split as x - y = 0 (A = I, B = -I, b = 0), the form used by both
/// shipped statistical instances.
class ConsensusProblem : public SeparableProblem {
 public:
  explicit ConsensusProblem(Index n);

  Dimensions dims() const override { return {n_, n_, n_}; }

  Vector apply_A(const Vector& x) const override;
  Vector apply_B(const Vector& y) const override;
  Vector apply_At(const Vector& r) const override;
  Vector apply_Bt(const Vector& r) const override;
  const Vector& rhs() const override { return zero_rhs_; }

 private:
  Index n_;
  Vector zero_rhs_;
};

/// L_beta(x, y, lambda) = theta1 + theta2 - lambda^T(Ax+By-b) + beta/2 |Ax+By-b|^2.
double augmented_lagrangian(const SeparableProblem& problem, const Iterate& w, double beta);

enum class Variant : std::uint8_t { classical, over_relaxed, relaxed_customized };

std::string_view to_string(Variant variant);
/// Parses "classical", "over_relaxed" (or "over-relaxed"), "relaxed_customized"
/// (or "relaxed-customized", "customized").
Variant parse_variant(std::string_view name);

struct SolverConfig {
  Variant variant = Variant::over_relaxed;
  double beta = 1.0;
  double gamma = 1.8;
  double eps_abs = 1e-5;
  double eps_rel = 1e-3;
  int max_iter = 1000;
  bool record_diagnostics = false;

  /// Throws std::invalid_argument on beta <= 0, gamma outside (0, 2) for the
  /// relaxed variants, non-positive tolerances or max_iter < 1.
  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double primal_residual = 0.0;  // |A x^k + B y^k - b|
  double dual_residual = 0.0;    // |y^k - y^{k-1}|
  double eps_pri = 0.0;
  double eps_dual = 0.0;
  double criterion_value = std::numeric_limits<double>::quiet_NaN();
  bool relaxed = false;
  // |B(y^{k-1} - y^k)|^2 + |lambda^{k-1} - lambda^k|^2
  double step_change_sq = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double elapsed = 0.0;

  bool within_tolerance() const {
    return primal_residual <= eps_pri && dual_residual <= eps_dual;
  }
};

/// eps_pri = sqrt(p) eps_abs + eps_rel * scale.
double primal_tolerance(Index p, double eps_abs, double eps_rel, double scale);
/// eps_dual = sqrt(n) eps_abs + eps_rel * |y|.
double dual_tolerance(Index n, double eps_abs, double eps_rel, double y_norm);

}  // namespace oradmm
