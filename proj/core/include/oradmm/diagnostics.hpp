#pragma once

// Runtime checks of the convergence analysis for the over-relaxed iteration.
//
// With v = (y, lambda), v_tilde = (y_hat, lambda_tilde) and relaxation factor gamma:
//
//   M = [ gamma I          0       ]     Q = [ beta B^T B    0         ]
//       [ -gamma beta B    gamma I ]         [ -B            I / beta  ]
//
//   H = Q M^{-1} = (1/gamma) blockdiag(beta B^T B, I / beta)
//
//   G = Q^T + Q - M^T H M
//     = [ (2 - 2 gamma) beta B^T B    (gamma - 1) B^T       ]
//       [ (gamma - 1) B               (2 - gamma) / beta I  ]
//
// A relaxed step satisfies v^{k+1} = v^k - M (v^k - v_tilde^k), and for any
// solution v*
//
//   |v^{k+1} - v*|_H^2 <= |v^k - v*|_H^2 - |v^k - v_tilde^k|_G^2.

#include "oradmm/engine.hpp"
#include "oradmm/problem.hpp"

#include <optional>
#include <span>
#include <vector>

namespace oradmm {

/// Dense materialization is refused beyond this many rows of (y, lambda).
inline constexpr Index kDenseAnalysisLimit = 2000;

struct AnalysisMatrices {
  Matrix M;
  Matrix Q;
  Matrix H;
  Matrix G;
  Matrix B;
  double beta = 1.0;
  double gamma = 1.0;

  Index n2() const { return B.cols(); }
  Index m() const { return B.rows(); }
};

/// Builds M, Q, H and G for the given B. Throws std::invalid_argument when B
/// is rank-deficient (relative singular-value cutoff 1e-10), beta <= 0 or gamma
/// is outside (0, 2); std::length_error when n2 + m exceeds kDenseAnalysisLimit.
AnalysisMatrices build_matrices(const Matrix& B, double beta, double gamma);

/// v^T H v.
double h_norm_sq(const EssentialState& v, const AnalysisMatrices& mats);
/// d^T G d.
double g_form(const EssentialState& d, const AnalysisMatrices& mats);

/// Same quadratic forms evaluated through B-applications only, so they work
/// at any size.
class AnalysisMetric {
 public:
  AnalysisMetric(const SeparableProblem& problem, double beta, double gamma);

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  double h_norm_sq(const EssentialState& v) const;
  /// (2-2g) beta |B d_y|^2 + ((2-g)/beta) |d_lambda|^2 + 2 (g-1) d_lambda^T B d_y
  double g_form(const EssentialState& d) const;

 private:
  const SeparableProblem* problem_;
  double beta_;
  double gamma_;
};

/// (y_hat, lambda_tilde): the point the correction is taken towards.
EssentialState tilde_state(const HatPoint& hat);

EssentialState difference(const EssentialState& a, const EssentialState& b);

/// The G-form of v^k - v_tilde^k rewritten in terms of the step actually taken:
///
///   (2-g)/g^2 beta |B(y^k - y^{k+1})|^2 + (2-g)/(g^2 beta) |lambda^k - lambda^{k+1}|^2
///     + 2 (lambda^k - lambda_hat)^T B (y^k - y_hat)
///
/// Valid when v_next was produced from v_k with factor gamma.
double g_norm_expanded(const SeparableProblem& problem, const HatPoint& hat,
                       const EssentialState& v_k, const EssentialState& v_next, double beta,
                       double gamma);

/// |v_next - (v_k - M (v_k - v_tilde))| / max(1, |v_next|), matrix-free.
double correction_identity_error(const SeparableProblem& problem, const HatPoint& hat,
                                 const EssentialState& v_k, const EssentialState& v_next,
                                 double beta, double gamma);

/// |lambda_hat - lambda_tilde - beta B (y^k - y_hat)| / max(1, |lambda_hat|).
double hat_identity_error(const SeparableProblem& problem, const HatPoint& hat,
                          const EssentialState& v_k, double beta);

/// max of the x- and y-stationarity residuals and |Ax + By - b|_inf.
double kkt_residual(const SeparableProblem& problem, const Iterate& w);

/// Stand-in for an exact solution: classical ADMM at tolerances `tighten`
/// times smaller than `config`'s, capped at `max_iter` steps.
EssentialState reference_solution(const SeparableProblem& problem, const SolverConfig& config,
                                  double tighten = 100.0, int max_iter = 10000);

struct FejerReport {
  /// |v^k - v*|_H^2 for every state in the trajectory.
  std::vector<double> h_dist_sq;
  /// C1 |B(y^k - y^{k+1})|^2 + C2 |lambda^k - lambda^{k+1}|^2 per step.
  std::vector<double> gap_lhs;
  std::vector<bool> monotone_violation;
  std::vector<bool> gap_violation;
  int monotone_violations = 0;
  int gap_violations = 0;
  int checked_steps = 0;
  double tolerance = 0.0;
};

/// Audits a trajectory v^0, v^1, ... against v*. Step k (from trajectory[k] to
/// trajectory[k+1]) is checked when records[k] shows the gate held; the
/// tolerance is 1e-8 |v^0 - v*|_H^2. The constants C1 = (2-g)/g^2 beta and
/// C2 = (2-g)/(g^2 beta) use the factor the step applied (1 when unrelaxed).
FejerReport fejer_check(const SeparableProblem& problem,
                        std::span<const EssentialState> trajectory,
                        std::span<const IterationRecord> records, const EssentialState& v_star,
                        const AnalysisMetric& metric);

struct DiagnosticRow {
  int k = 0;
  double criterion_value = 0.0;
  bool relaxed = false;
  double gamma_applied = 1.0;
  double h_dist_sq = 0.0;       // at v^{k}, after the step; NaN without v*
  double g_norm_sq = 0.0;       // direct G-form of v^{k-1} - v_tilde
  double g_norm_expanded = 0.0;
  double g_relative_gap = 0.0;  // |direct - expanded| over the magnitude of the terms
  double correction_error = 0.0;
  double hat_identity_error = 0.0;
  bool monotone_violation = false;
  bool gap_violation = false;
};

/// Observer that audits every step of a running solve. With v* it also tracks
/// the H-distance online, using the same tolerance rule as fejer_check.
class StepAuditor {
 public:
  StepAuditor(const SeparableProblem& problem, double beta, double gamma,
              std::optional<EssentialState> v_star = std::nullopt);

  StepObserver observer();
  void observe(const StepTrace& trace);

  const std::vector<DiagnosticRow>& rows() const { return rows_; }

  int monotone_violations() const;
  int gap_violations() const;
  double max_correction_error() const;
  double max_hat_identity_error() const;
  double max_g_relative_gap() const;

 private:
  const SeparableProblem* problem_;
  double beta_;
  double gamma_;
  std::optional<EssentialState> v_star_;
  std::vector<DiagnosticRow> rows_;
  double h_prev_ = 0.0;
  double tolerance_ = 0.0;
};

}  // namespace oradmm
