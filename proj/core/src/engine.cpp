#include "oradmm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace oradmm {

namespace {

void fill_residuals(const SeparableProblem& problem, const EssentialState& v,
                    const SolverConfig& config, StepOutcome& out) {
  const Dimensions d = problem.dims();
  const Vector Ax = problem.apply_A(out.hat.x_next);
  const Vector By = problem.apply_B(out.next.y);
  const Vector& b = problem.rhs();

  IterationRecord& rec = out.record;
  rec.primal_residual = (Ax + By - b).norm();
  rec.dual_residual = (out.next.y - v.y).norm();
  const double scale = std::max({Ax.norm(), By.norm(), b.norm()});
  rec.eps_pri = primal_tolerance(d.m, config.eps_abs, config.eps_rel, scale);
  rec.eps_dual = dual_tolerance(d.n2, config.eps_abs, config.eps_rel, out.next.y.norm());
  rec.step_change_sq = problem.apply_B(v.y - out.next.y).squaredNorm() +
                       (v.lambda - out.next.lambda).squaredNorm();
  if (config.record_diagnostics) rec.objective = problem.objective(out.hat.x_next, out.next.y);
}

}  // namespace

HatPoint predict(const SeparableProblem& problem, const EssentialState& v, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("predict: beta must be positive");
  v.validate(problem.dims());

  HatPoint hat;
  hat.x_next = problem.solve_x(v.y, v.lambda, beta);
  hat.y_hat = problem.solve_y(hat.x_next, v.lambda, beta);
  const Vector Ax_minus_b = problem.apply_A(hat.x_next) - problem.rhs();
  hat.lambda_hat = v.lambda - beta * (Ax_minus_b + problem.apply_B(hat.y_hat));
  hat.lambda_tilde = v.lambda - beta * (Ax_minus_b + problem.apply_B(v.y));
  return hat;
}

double criterion_value(const SeparableProblem& problem, const EssentialState& v,
                       const HatPoint& hat) {
  const Dimensions d = problem.dims();
  require_dim("y_hat", hat.y_hat.size(), d.n2);
  require_dim("lambda_hat", hat.lambda_hat.size(), d.m);
  v.validate(d);
  const Vector dl = v.lambda - hat.lambda_hat;
  const Vector dy = problem.apply_B(v.y - hat.y_hat);
  const double value = dl.dot(dy);

  // First-order forward error bound of the computed product. A value inside
  // it has no reliable sign and is reported as an exact tie.
  constexpr double u = std::numeric_limits<double>::epsilon();
  const double lambda_scale = v.lambda.norm() + hat.lambda_hat.norm();
  const double y_scale = problem.apply_B(v.y).norm() + problem.apply_B(hat.y_hat).norm();
  const double bound = 8.0 * u *
                       (lambda_scale * dy.norm() + dl.norm() * y_scale +
                        static_cast<double>(d.m) * dl.cwiseAbs().dot(dy.cwiseAbs()));
  return std::abs(value) <= bound ? 0.0 : value;
}

EssentialState relax(const EssentialState& v, const HatPoint& hat, double gamma) {
  return {v.y - gamma * (v.y - hat.y_hat), v.lambda - gamma * (v.lambda - hat.lambda_hat)};
}

StepOutcome step_classical(const SeparableProblem& problem, const EssentialState& v,
                           const SolverConfig& config) {
  StepOutcome out;
  out.hat = predict(problem, v, config.beta);
  out.record.criterion_value = criterion_value(problem, v, out.hat);
  out.record.relaxed = false;
  out.next = {out.hat.y_hat, out.hat.lambda_hat};
  out.gamma_applied = 1.0;
  fill_residuals(problem, v, config, out);
  return out;
}

StepOutcome step_over_relaxed(const SeparableProblem& problem, const EssentialState& v,
                              const SolverConfig& config) {
  StepOutcome out;
  out.hat = predict(problem, v, config.beta);
  const double crit = criterion_value(problem, v, out.hat);
  out.record.criterion_value = crit;
  // A tie at exactly zero counts as the gate holding.
  if (crit >= 0.0) {
    out.next = relax(v, out.hat, config.gamma);
    out.record.relaxed = true;
    out.gamma_applied = config.gamma;
  } else {
    out.next = {out.hat.y_hat, out.hat.lambda_hat};
    out.record.relaxed = false;
    out.gamma_applied = 1.0;
  }
  fill_residuals(problem, v, config, out);
  return out;
}

StepOutcome step_relaxed_customized(const SeparableProblem& problem, const EssentialState& v,
                                    const SolverConfig& config) {
  if (!(config.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  v.validate(problem.dims());
  const double beta = config.beta;

  StepOutcome out;
  HatPoint& hat = out.hat;
  hat.x_next = problem.solve_x(v.y, v.lambda, beta);
  const Vector Ax_minus_b = problem.apply_A(hat.x_next) - problem.rhs();
  hat.lambda_tilde = v.lambda - beta * (Ax_minus_b + problem.apply_B(v.y));
  hat.y_hat = problem.solve_y(hat.x_next, hat.lambda_tilde, beta);
  hat.lambda_hat = v.lambda - beta * (Ax_minus_b + problem.apply_B(hat.y_hat));

  const double gamma = config.gamma;
  out.next = {v.y - gamma * (v.y - hat.y_hat), v.lambda - gamma * (v.lambda - hat.lambda_tilde)};
  out.record.relaxed = true;
  out.gamma_applied = gamma;
  fill_residuals(problem, v, config, out);
  return out;
}

StepOutcome step(const SeparableProblem& problem, const EssentialState& v,
                 const SolverConfig& config) {
  switch (config.variant) {
    case Variant::classical: return step_classical(problem, v, config);
    case Variant::over_relaxed: return step_over_relaxed(problem, v, config);
    case Variant::relaxed_customized: return step_relaxed_customized(problem, v, config);
  }
  throw std::logic_error("unhandled variant");
}

SolveResult run(const SeparableProblem& problem, const SolverConfig& config,
                const EssentialState& v0, const StepObserver& observer) {
  config.validate();
  const Dimensions d = problem.dims();
  v0.validate(d);

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  SolveResult result;
  result.records.reserve(static_cast<std::size_t>(std::min(config.max_iter, 4096)));
  EssentialState v = v0;
  Vector x = Vector::Zero(d.n1);

  for (int k = 1; k <= config.max_iter; ++k) {
    StepOutcome out;
    try {
      out = step(problem, v, config);
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(k) + " (" +
                               std::string(to_string(config.variant)) + "): " + e.what());
    }
    out.record.k = k;
    out.record.elapsed = std::chrono::duration<double>(clock::now() - start).count();
    result.records.push_back(out.record);
    result.iterations = k;

    if (!out.next.all_finite() || !out.hat.x_next.allFinite()) {
      result.status = SolveStatus::non_finite;
      break;
    }
    if (observer) observer(StepTrace{v, out});

    x = std::move(out.hat.x_next);
    v = std::move(out.next);
    if (out.record.within_tolerance()) {
      result.status = SolveStatus::converged;
      break;
    }
  }

  result.converged = result.status == SolveStatus::converged;
  result.final = Iterate{std::move(x), std::move(v.y), std::move(v.lambda)};
  return result;
}

SolveResult run(const SeparableProblem& problem, const SolverConfig& config,
                const StepObserver& observer) {
  return run(problem, config, EssentialState::zeros(problem.dims()), observer);
}

}  // namespace oradmm
