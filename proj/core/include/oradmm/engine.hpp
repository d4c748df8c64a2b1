#pragma once

// ADMM iteration in predict/correct form.
//
// Every variant first *predicts* from v^k = (y^k, lambda^k):
//
//   x^{k+1}    = argmin_x L_beta(x, y^k, lambda^k)
//   y_hat      = argmin_y L_beta(x^{k+1}, y, lambda^k)
//   lambda_hat = lambda^k - beta (A x^{k+1} + B y_hat - b)
//
// and then *corrects*:
//
//   classical           v^{k+1} = (y_hat, lambda_hat)
//   over_relaxed        v^{k+1} = v^k - gamma (v^k - v_hat)   if the gate
//                         (lambda^k - lambda_hat)^T B (y^k - y_hat) >= 0 holds,
//                       v^{k+1} = v_hat                        otherwise
//   relaxed_customized  multiplier predicted before y; relaxation with gamma
//                       applied unconditionally.

#include "oradmm/problem.hpp"

#include <functional>
#include <vector>

namespace oradmm {

/// Predictor output. `lambda_tilde` uses y^k in place of y_hat:
///   lambda_tilde = lambda^k - beta (A x^{k+1} + B y^k - b)
/// so that lambda_hat = lambda_tilde + beta B (y^k - y_hat).
struct HatPoint {
  Vector x_next;
  Vector y_hat;
  Vector lambda_hat;
  Vector lambda_tilde;
};

HatPoint predict(const SeparableProblem& problem, const EssentialState& v, double beta);

/// (lambda^k - lambda_hat)^T B (y^k - y_hat), or exactly 0 when the computed
/// value lies within its rounding-error bound.
double criterion_value(const SeparableProblem& problem, const EssentialState& v,
                       const HatPoint& hat);

/// v - gamma (v - (y_hat, lambda_hat)).
EssentialState relax(const EssentialState& v, const HatPoint& hat, double gamma);

struct StepOutcome {
  EssentialState next;
  HatPoint hat;
  IterationRecord record;
  /// Relaxation factor actually applied (1 on an un-relaxed step).
  double gamma_applied = 1.0;
};

StepOutcome step_classical(const SeparableProblem& problem, const EssentialState& v,
                           const SolverConfig& config);
StepOutcome step_over_relaxed(const SeparableProblem& problem, const EssentialState& v,
                              const SolverConfig& config);
/// Multiplier prediction first, then the y-subproblem against lambda_tilde;
/// hat.y_hat carries that y and hat.lambda_hat is recomputed from it.
StepOutcome step_relaxed_customized(const SeparableProblem& problem, const EssentialState& v,
                                    const SolverConfig& config);

/// Dispatches on config.variant.
StepOutcome step(const SeparableProblem& problem, const EssentialState& v,
                 const SolverConfig& config);

enum class SolveStatus { converged, max_iterations, non_finite };

struct SolveResult {
  Iterate final;
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iterations;
};

/// Everything an observer needs to audit one step after it is taken.
struct StepTrace {
  const EssentialState& before;
  const StepOutcome& outcome;
};

using StepObserver = std::function<void(const StepTrace&)>;

/// Iterates the configured variant from v0 until both residual tests pass or
/// max_iter steps are taken. A non-finite iterate stops the solve with
/// status non_finite; its record is kept for inspection.
SolveResult run(const SeparableProblem& problem, const SolverConfig& config,
                const EssentialState& v0, const StepObserver& observer = {});

/// Same, from v0 = 0.
SolveResult run(const SeparableProblem& problem, const SolverConfig& config,
                const StepObserver& observer = {});

}  // namespace oradmm
