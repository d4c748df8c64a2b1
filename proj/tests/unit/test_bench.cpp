#include "oradmm/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace oradmm;

namespace {

BenchmarkSpec small_lasso() {
  BenchmarkSpec spec;
  spec.problem = ProblemKind::lasso;
  spec.sizes = {{30, 60}, {40, 50}};
  spec.tolerances = {{1e-4, 1e-2}, {1e-5, 1e-3}};
  spec.repeats = 3;
  spec.seed_base = 11;
  return spec;
}

std::string summary_csv(const BenchmarkReport& r) {
  std::ostringstream os;
  write_summary_csv(os, r);
  return os.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Benchmark, SpecValidation) {
  BenchmarkSpec spec = small_lasso();
  EXPECT_NO_THROW(spec.validate());
  spec.repeats = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_lasso();
  spec.sizes.clear();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_lasso();
  spec.problem = ProblemKind::covsel;
  spec.sizes = {{0, 5}};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_lasso();
  spec.gamma = 2.5;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Benchmark, CellLayoutAndSeeds) {
  const BenchmarkReport r = run_benchmark(small_lasso());
  ASSERT_EQ(r.cells.size(), 2u * 2u * 3u);
  ASSERT_EQ(r.trajectories.size(), r.cells.size());
  EXPECT_EQ(r.cells[0].size.n, 60);
  EXPECT_EQ(r.cells[0].variant, Variant::classical);
  EXPECT_EQ(r.cells[1].variant, Variant::over_relaxed);
  EXPECT_EQ(r.cells[3].tolerance.eps_abs, 1e-5);
  EXPECT_EQ(r.cells[6].size.n, 50);
  for (const CellSummary& c : r.cells) {
    ASSERT_EQ(c.runs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(c.runs[i].seed, 11u + i);
    EXPECT_EQ(c.dnf(), 0);
    EXPECT_LE(c.min_iterations(), c.median_iterations());
    EXPECT_LE(c.median_iterations(), c.max_iterations());
  }
  EXPECT_EQ(r.total_dnf(), 0);
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    EXPECT_EQ(static_cast<int>(r.trajectories[i].records.size()), r.cells[i].runs[0].iterations);
  }
}

TEST(Benchmark, SummaryCsvIsDeterministicAcrossJobCounts) {
  BenchmarkSpec spec = small_lasso();
  const std::string one = summary_csv(run_benchmark(spec));
  spec.jobs = 4;
  const std::string four = summary_csv(run_benchmark(spec));
  EXPECT_EQ(one, four);
  EXPECT_EQ(line_count(one), 1 + 12u);
  EXPECT_EQ(one.rfind("problem,m,n,eps_abs,eps_rel,variant,", 0), 0u);
}

TEST(Benchmark, DnfIsCounted) {
  BenchmarkSpec spec = small_lasso();
  spec.sizes = {{30, 60}};
  spec.tolerances = {{1e-12, 1e-12}};
  spec.max_iter = 5;
  spec.repeats = 2;
  const BenchmarkReport r = run_benchmark(spec);
  EXPECT_EQ(r.total_dnf(), 3 * 2);
  for (const CellSummary& c : r.cells) EXPECT_EQ(c.max_iterations(), 5);
}

TEST(Benchmark, CovselCells) {
  BenchmarkSpec spec;
  spec.problem = ProblemKind::covsel;
  spec.sizes = {{0, 15}};
  spec.tolerances = {{1e-5, 1e-3}};
  spec.gamma = 1.7;
  spec.repeats = 2;
  const BenchmarkReport r = run_benchmark(spec);
  ASSERT_EQ(r.cells.size(), 3u);
  EXPECT_EQ(r.total_dnf(), 0);
  const std::string csv = summary_csv(r);
  EXPECT_NE(csv.find("\ncovsel,15,15,"), std::string::npos);
}

TEST(Benchmark, DiagnosticsAttachAuditRows) {
  BenchmarkSpec spec = small_lasso();
  spec.sizes = {{30, 60}};
  spec.tolerances = {{1e-5, 1e-3}};
  spec.repeats = 1;
  spec.diagnostics = true;
  const BenchmarkReport r = run_benchmark(spec);
  for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
    const CellTrajectory& t = r.trajectories[i];
    ASSERT_EQ(t.diagnostics.size(), t.records.size());
    // the customized correction does not take the v - gamma M (v - v~) form
    const bool m_form = r.cells[i].variant != Variant::relaxed_customized;
    for (const DiagnosticRow& row : t.diagnostics) {
      EXPECT_FALSE(std::isnan(row.h_dist_sq));
      if (m_form) EXPECT_LT(row.correction_error, 1e-12);
    }
  }
  std::ostringstream os;
  write_trajectory_csv(os, r.trajectories[1]);
  EXPECT_EQ(os.str().rfind("k,primal_residual,dual_residual,criterion_value,relaxed,h_dist_sq\n", 0),
            0u);
  EXPECT_EQ(line_count(os.str()), 1 + r.trajectories[1].records.size());

  std::ostringstream diag;
  write_diagnostic_csv(diag, r.trajectories[1].diagnostics);
  EXPECT_EQ(line_count(diag.str()), 1 + r.trajectories[1].diagnostics.size());
}

TEST(Benchmark, ComparisonCsvPadsShortSeries) {
  std::vector<IterationRecord> a(3), b(1);
  for (int i = 0; i < 3; ++i) {
    a[i].k = i + 1;
    a[i].primal_residual = std::pow(10.0, -i);
    a[i].dual_residual = 0.0;
  }
  b[0].k = 1;
  b[0].primal_residual = 0.5;
  b[0].dual_residual = 0.25;
  std::ostringstream os;
  write_comparison_csv(os, {{"classical", &a}, {"over_relaxed", &b}});
  EXPECT_EQ(os.str(),
            "k,classical_primal,classical_dual,over_relaxed_primal,over_relaxed_dual\n"
            "1,1,1e-300,0.5,0.25\n"
            "2,0.1,1e-300,,\n"
            "3,0.01,1e-300,,\n");
}

TEST(Benchmark, TableHasOneLinePerSizeAndTolerance) {
  const BenchmarkReport r = run_benchmark(small_lasso());
  const std::string table = format_summary_table(r, false);
  EXPECT_EQ(line_count(table), 2u + 4u);
  EXPECT_NE(table.find("over_relaxed"), std::string::npos);
  EXPECT_EQ(table.find("Time"), std::string::npos);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(std::nan("")), "");
  const double v = 0.12345678901234567;
  EXPECT_EQ(std::stod(format_number(v)), v);
}
