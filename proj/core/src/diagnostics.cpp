#include "oradmm/diagnostics.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oradmm {

namespace {

void check_parameters(double beta, double gamma) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(gamma > 0.0 && gamma < 2.0)) throw std::invalid_argument("gamma must lie in (0, 2)");
}

Vector stack(const EssentialState& v) {
  Vector out(v.y.size() + v.lambda.size());
  out << v.y, v.lambda;
  return out;
}

bool criterion_held(double value) { return !std::isnan(value) && value >= 0.0; }

}  // namespace

AnalysisMatrices build_matrices(const Matrix& B, double beta, double gamma) {
  check_parameters(beta, gamma);
  const Index m = B.rows();
  const Index n2 = B.cols();
  if (n2 + m > kDenseAnalysisLimit) {
    throw std::length_error("dense analysis matrices limited to n2 + m <= 2000");
  }
  if (n2 > m) throw std::invalid_argument("H not positive definite: B rank-deficient");
  if (n2 > 0) {
    const Eigen::JacobiSVD<Matrix> svd(B);
    const auto& sv = svd.singularValues();
    if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff())) {
      throw std::invalid_argument("H not positive definite: B rank-deficient");
    }
  }

  const Index n = n2 + m;
  const Matrix BtB = B.transpose() * B;
  const Matrix In2 = Matrix::Identity(n2, n2);
  const Matrix Im = Matrix::Identity(m, m);

  AnalysisMatrices mats;
  mats.B = B;
  mats.beta = beta;
  mats.gamma = gamma;

  mats.M = Matrix::Zero(n, n);
  mats.M.topLeftCorner(n2, n2) = gamma * In2;
  mats.M.bottomLeftCorner(m, n2) = -gamma * beta * B;
  mats.M.bottomRightCorner(m, m) = gamma * Im;

  mats.Q = Matrix::Zero(n, n);
  mats.Q.topLeftCorner(n2, n2) = beta * BtB;
  mats.Q.bottomLeftCorner(m, n2) = -B;
  mats.Q.bottomRightCorner(m, m) = Im / beta;

  mats.H = Matrix::Zero(n, n);
  mats.H.topLeftCorner(n2, n2) = (beta / gamma) * BtB;
  mats.H.bottomRightCorner(m, m) = Im / (gamma * beta);

  mats.G = Matrix::Zero(n, n);
  mats.G.topLeftCorner(n2, n2) = (2.0 - 2.0 * gamma) * beta * BtB;
  mats.G.topRightCorner(n2, m) = (gamma - 1.0) * B.transpose();
  mats.G.bottomLeftCorner(m, n2) = (gamma - 1.0) * B;
  mats.G.bottomRightCorner(m, m) = ((2.0 - gamma) / beta) * Im;
  return mats;
}

double h_norm_sq(const EssentialState& v, const AnalysisMatrices& mats) {
  require_dim("y", v.y.size(), mats.n2());
  require_dim("lambda", v.lambda.size(), mats.m());
  const Vector s = stack(v);
  return s.dot(mats.H * s);
}

double g_form(const EssentialState& d, const AnalysisMatrices& mats) {
  require_dim("y", d.y.size(), mats.n2());
  require_dim("lambda", d.lambda.size(), mats.m());
  const Vector s = stack(d);
  return s.dot(mats.G * s);
}

AnalysisMetric::AnalysisMetric(const SeparableProblem& problem, double beta, double gamma)
    : problem_(&problem), beta_(beta), gamma_(gamma) {
  check_parameters(beta, gamma);
}

double AnalysisMetric::h_norm_sq(const EssentialState& v) const {
  v.validate(problem_->dims());
  return (beta_ * problem_->apply_B(v.y).squaredNorm() + v.lambda.squaredNorm() / beta_) /
         gamma_;
}

double AnalysisMetric::g_form(const EssentialState& d) const {
  d.validate(problem_->dims());
  const Vector Bd = problem_->apply_B(d.y);
  const double g = gamma_;
  return (2.0 - 2.0 * g) * beta_ * Bd.squaredNorm() +
         ((2.0 - g) / beta_) * d.lambda.squaredNorm() + 2.0 * (g - 1.0) * d.lambda.dot(Bd);
}

EssentialState tilde_state(const HatPoint& hat) { return {hat.y_hat, hat.lambda_tilde}; }

EssentialState difference(const EssentialState& a, const EssentialState& b) {
  return {a.y - b.y, a.lambda - b.lambda};
}

double g_norm_expanded(const SeparableProblem& problem, const HatPoint& hat,
                       const EssentialState& v_k, const EssentialState& v_next, double beta,
                       double gamma) {
  check_parameters(beta, gamma);
  const double c = (2.0 - gamma) / (gamma * gamma);
  const double step_y = problem.apply_B(v_k.y - v_next.y).squaredNorm();
  const double step_lambda = (v_k.lambda - v_next.lambda).squaredNorm();
  const double cross = (v_k.lambda - hat.lambda_hat).dot(problem.apply_B(v_k.y - hat.y_hat));
  return c * beta * step_y + (c / beta) * step_lambda + 2.0 * cross;
}

double correction_identity_error(const SeparableProblem& problem, const HatPoint& hat,
                                 const EssentialState& v_k, const EssentialState& v_next,
                                 double beta, double gamma) {
  const EssentialState d = difference(v_k, tilde_state(hat));
  // M d = (gamma d_y, -gamma beta B d_y + gamma d_lambda)
  const Vector y_pred = v_k.y - gamma * d.y;
  const Vector lambda_pred =
      v_k.lambda - (gamma * d.lambda - gamma * beta * problem.apply_B(d.y));
  const double err =
      std::sqrt((v_next.y - y_pred).squaredNorm() + (v_next.lambda - lambda_pred).squaredNorm());
  const double scale =
      std::max(1.0, std::sqrt(v_next.y.squaredNorm() + v_next.lambda.squaredNorm()));
  return err / scale;
}

double hat_identity_error(const SeparableProblem& problem, const HatPoint& hat,
                          const EssentialState& v_k, double beta) {
  const Vector rebuilt = hat.lambda_tilde + beta * problem.apply_B(v_k.y - hat.y_hat);
  return (hat.lambda_hat - rebuilt).norm() / std::max(1.0, hat.lambda_hat.norm());
}

double kkt_residual(const SeparableProblem& problem, const Iterate& w) {
  w.validate(problem.dims());
  const double feas = problem.constraint_residual(w.x, w.y).lpNorm<Eigen::Infinity>();
  return std::max({problem.x_stationarity(w.x, w.lambda),
                   problem.y_stationarity(w.y, w.lambda), feas});
}

EssentialState reference_solution(const SeparableProblem& problem, const SolverConfig& config,
                                  double tighten, int max_iter) {
  SolverConfig ref = config;
  ref.variant = Variant::classical;
  ref.eps_abs = config.eps_abs / tighten;
  ref.eps_rel = config.eps_rel / tighten;
  ref.max_iter = max_iter;
  ref.record_diagnostics = false;
  SolveResult res = run(problem, ref);
  if (res.status == SolveStatus::non_finite) {
    throw std::runtime_error("reference solve produced a non-finite iterate");
  }
  return {std::move(res.final.y), std::move(res.final.lambda)};
}

FejerReport fejer_check(const SeparableProblem& problem,
                        std::span<const EssentialState> trajectory,
                        std::span<const IterationRecord> records, const EssentialState& v_star,
                        const AnalysisMetric& metric) {
  FejerReport report;
  if (trajectory.empty()) return report;
  const std::size_t steps = trajectory.size() - 1;
  if (records.size() < steps) {
    throw std::invalid_argument("fejer_check: fewer records than trajectory steps");
  }

  report.h_dist_sq.reserve(trajectory.size());
  for (const EssentialState& v : trajectory) {
    report.h_dist_sq.push_back(metric.h_norm_sq(difference(v, v_star)));
  }
  report.tolerance = 1e-8 * report.h_dist_sq.front();

  const double beta = metric.beta();
  const double gamma = metric.gamma();
  report.gap_lhs.assign(steps, 0.0);
  report.monotone_violation.assign(steps, false);
  report.gap_violation.assign(steps, false);
  for (std::size_t k = 0; k < steps; ++k) {
    const IterationRecord& rec = records[k];
    const double g = rec.relaxed ? gamma : 1.0;
    const double c = (2.0 - g) / (g * g);
    const EssentialState& a = trajectory[k];
    const EssentialState& b = trajectory[k + 1];
    report.gap_lhs[k] = c * beta * problem.apply_B(a.y - b.y).squaredNorm() +
                        (c / beta) * (a.lambda - b.lambda).squaredNorm();
    if (!criterion_held(rec.criterion_value)) continue;

    ++report.checked_steps;
    const double decrease = report.h_dist_sq[k] - report.h_dist_sq[k + 1];
    if (decrease < -report.tolerance) {
      report.monotone_violation[k] = true;
      ++report.monotone_violations;
    }
    // The metric is scaled by 1/gamma; an unrelaxed step lives in the gamma = 1 metric.
    if (report.gap_lhs[k] > decrease * (gamma / g) + report.tolerance) {
      report.gap_violation[k] = true;
      ++report.gap_violations;
    }
  }
  return report;
}

StepAuditor::StepAuditor(const SeparableProblem& problem, double beta, double gamma,
                         std::optional<EssentialState> v_star)
    : problem_(&problem), beta_(beta), gamma_(gamma), v_star_(std::move(v_star)) {
  check_parameters(beta, gamma);
}

StepObserver StepAuditor::observer() {
  return [this](const StepTrace& trace) { observe(trace); };
}

void StepAuditor::observe(const StepTrace& trace) {
  const StepOutcome& out = trace.outcome;
  const EssentialState& v_k = trace.before;
  const double g = out.gamma_applied;

  DiagnosticRow row;
  row.k = out.record.k;
  row.criterion_value = out.record.criterion_value;
  row.relaxed = out.record.relaxed;
  row.gamma_applied = g;

  const AnalysisMetric step_metric(*problem_, beta_, g);
  row.g_norm_sq = step_metric.g_form(difference(v_k, tilde_state(out.hat)));
  row.g_norm_expanded = g_norm_expanded(*problem_, out.hat, v_k, out.next, beta_, g);
  {
    const double c = (2.0 - g) / (g * g);
    const double cross =
        (v_k.lambda - out.hat.lambda_hat).dot(problem_->apply_B(v_k.y - out.hat.y_hat));
    const double scale = c * beta_ * problem_->apply_B(v_k.y - out.next.y).squaredNorm() +
                         (c / beta_) * (v_k.lambda - out.next.lambda).squaredNorm() +
                         2.0 * std::abs(cross);
    row.g_relative_gap = scale > 0.0
                             ? std::abs(row.g_norm_sq - row.g_norm_expanded) / scale
                             : std::abs(row.g_norm_sq - row.g_norm_expanded);
  }
  row.correction_error = correction_identity_error(*problem_, out.hat, v_k, out.next, beta_, g);
  row.hat_identity_error = hat_identity_error(*problem_, out.hat, v_k, beta_);

  if (v_star_) {
    const AnalysisMetric metric(*problem_, beta_, gamma_);
    if (rows_.empty()) {
      h_prev_ = metric.h_norm_sq(difference(v_k, *v_star_));
      tolerance_ = 1e-8 * h_prev_;
    }
    row.h_dist_sq = metric.h_norm_sq(difference(out.next, *v_star_));
    if (criterion_held(row.criterion_value)) {
      const double decrease = h_prev_ - row.h_dist_sq;
      const double c = (2.0 - g) / (g * g);
      const double gap_lhs =
          c * beta_ * problem_->apply_B(v_k.y - out.next.y).squaredNorm() +
          (c / beta_) * (v_k.lambda - out.next.lambda).squaredNorm();
      row.monotone_violation = decrease < -tolerance_;
      row.gap_violation = gap_lhs > decrease * (gamma_ / g) + tolerance_;
    }
    h_prev_ = row.h_dist_sq;
  } else {
    row.h_dist_sq = std::numeric_limits<double>::quiet_NaN();
  }
  rows_.push_back(row);
}

int StepAuditor::monotone_violations() const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(),
                                        [](const DiagnosticRow& r) { return r.monotone_violation; }));
}

int StepAuditor::gap_violations() const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(),
                                        [](const DiagnosticRow& r) { return r.gap_violation; }));
}

double StepAuditor::max_correction_error() const {
  double out = 0.0;
  for (const auto& r : rows_) out = std::max(out, r.correction_error);
  return out;
}

double StepAuditor::max_hat_identity_error() const {
  double out = 0.0;
  for (const auto& r : rows_) out = std::max(out, r.hat_identity_error);
  return out;
}

double StepAuditor::max_g_relative_gap() const {
  double out = 0.0;
  for (const auto& r : rows_) out = std::max(out, r.g_relative_gap);
  return out;
}

}  // namespace oradmm
