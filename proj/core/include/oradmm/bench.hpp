#pragma once

// Experimental harness: seeded instance grids, multi-variant comparisons and
// CSV/table output.

#include "oradmm/covsel.hpp"
#include "oradmm/diagnostics.hpp"
#include "oradmm/engine.hpp"
#include "oradmm/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace oradmm {

enum class ProblemKind { lasso, covsel };

std::string_view to_string(ProblemKind kind);

struct ProblemSize {
  Index m = 0;  // lasso rows; ignored for covsel
  Index n = 0;
};

struct Tolerance {
  double eps_abs = 1e-5;
  double eps_rel = 1e-3;
};

struct BenchmarkSpec {
  ProblemKind problem = ProblemKind::lasso;
  std::vector<ProblemSize> sizes;
  std::vector<Tolerance> tolerances;
  std::vector<Variant> variants = {Variant::classical, Variant::over_relaxed,
                                   Variant::relaxed_customized};
  double gamma = 1.8;
  double beta = 1.0;
  double rho_fraction = 0.1;  // lasso
  double tau = kDefaultCovselTau;  // covsel
  int repeats = 10;
  std::uint64_t seed_base = 0;
  int max_iter = 1000;
  int jobs = 1;
  /// Audit the first-seed trajectory of every cell against a reference solution.
  bool diagnostics = false;

  void validate() const;
};

struct RunStats {
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double seconds = 0.0;
  /// Fraction of steps on which (lambda - lambda_hat)^T B (y - y_hat) >= 0.
  double criterion_fraction = 0.0;
  double first_step_change_sq = 0.0;
  double last_step_change_sq = 0.0;
};

struct CellSummary {
  ProblemSize size;
  Tolerance tolerance;
  Variant variant = Variant::classical;
  std::vector<RunStats> runs;

  double mean_iterations() const;
  double median_iterations() const;
  int min_iterations() const;
  int max_iterations() const;
  double mean_primal_residual() const;
  double mean_dual_residual() const;
  double mean_seconds() const;
  double mean_criterion_fraction() const;
  int dnf() const;
};

struct CellTrajectory {
  ProblemSize size;
  Tolerance tolerance;
  Variant variant = Variant::classical;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  std::vector<DiagnosticRow> diagnostics;  // empty unless spec.diagnostics
};

struct BenchmarkReport {
  BenchmarkSpec spec;
  /// Ordered size-major, then tolerance, then variant.
  std::vector<CellSummary> cells;
  /// First-seed trajectory of every cell, same order.
  std::vector<CellTrajectory> trajectories;

  int total_dnf() const;
};

/// Runs spec.repeats seeded solves per (size, tolerance, variant); run i uses
/// seed_base + i. Instance generation is excluded from the timings. Output is
/// independent of spec.jobs.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec);

/// One row per cell. Contains no timings, so identical specs give identical bytes.
void write_summary_csv(std::ostream& os, const BenchmarkReport& report);

/// Aligned table, one line per (size, tolerance) with a column group per variant.
std::string format_summary_table(const BenchmarkReport& report, bool with_time = true);

/// k, primal_residual, dual_residual, criterion_value, relaxed[, h_dist_sq].
void write_trajectory_csv(std::ostream& os, const CellTrajectory& trajectory);

struct LabeledRecords {
  std::string label;
  const std::vector<IterationRecord>* records = nullptr;
};

/// Plot data: k then a (primal, dual) column group per series, residuals
/// clamped below at 1e-300 so they can go on a log axis. Series that stop
/// early leave their cells empty.
void write_comparison_csv(std::ostream& os, const std::vector<LabeledRecords>& series);

/// k, h_dist_sq, g_norm_sq, g_norm_expanded, criterion_value, relaxed,
/// correction_error, hat_identity_error, monotone_violation, gap_violation.
void write_diagnostic_csv(std::ostream& os, const std::vector<DiagnosticRow>& rows);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace oradmm
