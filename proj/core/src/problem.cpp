#include "oradmm/problem.hpp"

#include <cmath>
#include <sstream>

namespace oradmm {

namespace {

std::string dimension_message(std::string_view operand, Index got, Index expected) {
  std::ostringstream os;
  os << "dimension mismatch for '" << operand << "': got " << got << ", expected " << expected;
  return os.str();
}

}  // namespace

DimensionError::DimensionError(std::string_view operand, Index got, Index expected)
    : std::invalid_argument(dimension_message(operand, got, expected)), operand_(operand) {}

void require_dim(std::string_view operand, Index got, Index expected) {
  if (got != expected) throw DimensionError(operand, got, expected);
}

void Iterate::validate(const Dimensions& dims) const {
  require_dim("x", x.size(), dims.n1);
  require_dim("y", y.size(), dims.n2);
  require_dim("lambda", lambda.size(), dims.m);
}

EssentialState EssentialState::zeros(const Dimensions& dims) {
  return {Vector::Zero(dims.n2), Vector::Zero(dims.m)};
}

void EssentialState::validate(const Dimensions& dims) const {
  require_dim("y", y.size(), dims.n2);
  require_dim("lambda", lambda.size(), dims.m);
}

bool EssentialState::all_finite() const { return y.allFinite() && lambda.allFinite(); }

Vector SeparableProblem::constraint_residual(const Vector& x, const Vector& y) const {
  return apply_A(x) + apply_B(y) - rhs();
}

Matrix SeparableProblem::dense_B() const {
  const Dimensions d = dims();
  Matrix B(d.m, d.n2);
  Vector e = Vector::Zero(d.n2);
  for (Index j = 0; j < d.n2; ++j) {
    e[j] = 1.0;
    B.col(j) = apply_B(e);
    e[j] = 0.0;
  }
  return B;
}

ConsensusProblem::ConsensusProblem(Index n) : n_(n), zero_rhs_(Vector::Zero(n)) {}

Vector ConsensusProblem::apply_A(const Vector& x) const { return x; }
Vector ConsensusProblem::apply_B(const Vector& y) const { return -y; }
Vector ConsensusProblem::apply_At(const Vector& r) const { return r; }
Vector ConsensusProblem::apply_Bt(const Vector& r) const { return -r; }

double augmented_lagrangian(const SeparableProblem& problem, const Iterate& w, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("augmented_lagrangian: beta must be positive");
  w.validate(problem.dims());
  const Vector r = problem.constraint_residual(w.x, w.y);
  return problem.objective(w.x, w.y) - w.lambda.dot(r) + 0.5 * beta * r.squaredNorm();
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::classical: return "classical";
    case Variant::over_relaxed: return "over_relaxed";
    case Variant::relaxed_customized: return "relaxed_customized";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "classical" || name == "admm") return Variant::classical;
  if (name == "over_relaxed" || name == "over-relaxed" || name == "relaxed") {
    return Variant::over_relaxed;
  }
  if (name == "relaxed_customized" || name == "relaxed-customized" || name == "customized") {
    return Variant::relaxed_customized;
  }
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (variant != Variant::classical && !(gamma > 0.0 && gamma < 2.0)) {
    throw std::invalid_argument("gamma must lie in (0, 2)");
  }
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) {
    throw std::invalid_argument("eps_abs and eps_rel must be positive");
  }
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

double primal_tolerance(Index p, double eps_abs, double eps_rel, double scale) {
  return std::sqrt(static_cast<double>(p)) * eps_abs + eps_rel * scale;
}

double dual_tolerance(Index n, double eps_abs, double eps_rel, double y_norm) {
  return std::sqrt(static_cast<double>(n)) * eps_abs + eps_rel * y_norm;
}

}  // namespace oradmm
