#include "oradmm/bench.hpp"
#include "oradmm/covsel.hpp"
#include "oradmm/diagnostics.hpp"
#include "oradmm/engine.hpp"
#include "oradmm/instance_io.hpp"
#include "oradmm/lasso.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace oradmm;

namespace {

constexpr int kExitDnf = 2;
constexpr int kExitViolation = 3;

struct Options {
  std::vector<Index> m;
  std::vector<Index> n;
  std::vector<double> eps_abs;
  std::vector<double> eps_rel;
  std::vector<std::string> variants;
  std::optional<double> gamma;
  double beta = 1.0;
  double rho_fraction = 0.1;
  double tau = kDefaultCovselTau;
  int repeats = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  int max_iter = 1000;
  std::string out;
  std::string problem = "lasso";
  std::string instance;
  std::string export_instance;
  bool strict = false;
  bool diagnostics = false;
  bool no_time = false;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream os = open_output(path);
  writer(os);
  finish(os, path);
}

std::vector<Tolerance> tolerances(const Options& o, Tolerance fallback) {
  std::vector<double> abs = o.eps_abs, rel = o.eps_rel;
  if (abs.empty()) abs = {fallback.eps_abs};
  if (rel.empty()) rel = {fallback.eps_rel};
  if (abs.size() == 1 && rel.size() > 1) abs.resize(rel.size(), abs.front());
  if (rel.size() == 1 && abs.size() > 1) rel.resize(abs.size(), rel.front());
  if (abs.size() != rel.size()) {
    throw std::invalid_argument("--eps-abs and --eps-rel must have the same number of values");
  }
  std::vector<Tolerance> out;
  for (std::size_t i = 0; i < abs.size(); ++i) out.push_back({abs[i], rel[i]});
  return out;
}

std::vector<Variant> variants(const Options& o) {
  if (o.variants.empty()) {
    return {Variant::classical, Variant::over_relaxed, Variant::relaxed_customized};
  }
  std::vector<Variant> out;
  for (const std::string& v : o.variants) out.push_back(parse_variant(v));
  return out;
}

double default_gamma(ProblemKind kind) { return kind == ProblemKind::lasso ? 1.8 : 1.7; }

ProblemKind parse_problem(const std::string& name) {
  if (name == "lasso") return ProblemKind::lasso;
  if (name == "covsel") return ProblemKind::covsel;
  throw std::invalid_argument("unknown problem '" + name + "' (expected lasso or covsel)");
}

std::string cell_label(ProblemKind kind, const ProblemSize& size, const Tolerance& tol) {
  std::ostringstream os;
  os << to_string(kind) << '_';
  if (kind == ProblemKind::lasso) os << size.m << 'x';
  os << size.n << '_' << format_number(tol.eps_abs) << '_' << format_number(tol.eps_rel);
  return os.str();
}

BenchmarkSpec benchmark_spec(const Options& o, ProblemKind kind) {
  BenchmarkSpec spec;
  spec.problem = kind;
  if (kind == ProblemKind::lasso) {
    const std::vector<Index> m = o.m.empty() ? std::vector<Index>{1000} : o.m;
    const std::vector<Index> n = o.n.empty() ? std::vector<Index>{1500} : o.n;
    if (m.size() != n.size()) {
      throw std::invalid_argument("--m and --n must have the same number of values");
    }
    for (std::size_t i = 0; i < m.size(); ++i) spec.sizes.push_back({m[i], n[i]});
    spec.tolerances = tolerances(o, {1e-5, 1e-3});
  } else {
    const std::vector<Index> n = o.n.empty() ? std::vector<Index>{300} : o.n;
    for (Index v : n) spec.sizes.push_back({0, v});
    spec.tolerances = tolerances(o, {1e-6, 1e-4});
  }
  spec.variants = variants(o);
  spec.gamma = o.gamma.value_or(default_gamma(kind));
  spec.beta = o.beta;
  spec.rho_fraction = o.rho_fraction;
  spec.tau = o.tau;
  spec.repeats = o.repeats;
  spec.seed_base = o.seed;
  spec.max_iter = o.max_iter;
  spec.jobs = o.jobs;
  spec.diagnostics = o.diagnostics;
  spec.validate();
  return spec;
}

void write_report(const BenchmarkReport& report, const fs::path& dir) {
  write_file(dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, report); });
  const BenchmarkSpec& spec = report.spec;
  std::size_t cell = 0;
  for (const ProblemSize& size : spec.sizes) {
    for (const Tolerance& tol : spec.tolerances) {
      const std::string label = cell_label(spec.problem, size, tol);
      std::vector<LabeledRecords> series;
      for (std::size_t v = 0; v < spec.variants.size(); ++v, ++cell) {
        const CellTrajectory& t = report.trajectories[cell];
        const std::string name = std::string(to_string(t.variant));
        series.push_back({name, &t.records});
        write_file(dir / "trajectories" / (label + '_' + name + ".csv"),
                   [&](std::ostream& os) { write_trajectory_csv(os, t); });
        if (spec.diagnostics) {
          write_file(dir / "diagnostics" / (label + '_' + name + ".csv"),
                     [&](std::ostream& os) { write_diagnostic_csv(os, t.diagnostics); });
        }
      }
      write_file(dir / "residuals" / (label + ".csv"),
                 [&](std::ostream& os) { write_comparison_csv(os, series); });
    }
  }
}

int run_grid(const Options& o, ProblemKind kind) {
  const BenchmarkSpec spec = benchmark_spec(o, kind);
  const BenchmarkReport report = run_benchmark(spec);
  std::cout << format_summary_table(report, !o.no_time);
  if (!o.out.empty()) write_report(report, o.out);
  const int dnf = report.total_dnf();
  if (dnf > 0) {
    std::cerr << "warning: " << dnf << " run(s) did not finish within " << spec.max_iter
              << " iterations (DNF)\n";
    if (o.strict) return kExitDnf;
  }
  return 0;
}

struct LoadedProblem {
  ProblemKind kind = ProblemKind::lasso;
  std::unique_ptr<ConsensusProblem> problem;
  std::string description;
};

LoadedProblem load_problem(const Options& o) {
  LoadedProblem out;
  std::ostringstream desc;
  if (!o.instance.empty()) {
    const fs::path path = o.instance;
    if (peek_instance_kind(path) == InstanceKind::lasso) {
      out.kind = ProblemKind::lasso;
      auto p = std::make_unique<LassoInstance>(load_lasso(path));
      desc << "lasso " << p->A().rows() << 'x' << p->A().cols() << " from " << path.string();
      out.problem = std::move(p);
    } else {
      out.kind = ProblemKind::covsel;
      auto p = std::make_unique<CovselInstance>(load_covsel(path));
      desc << "covsel n=" << p->S().rows() << " from " << path.string();
      out.problem = std::move(p);
    }
  } else {
    out.kind = parse_problem(o.problem);
    if (out.kind == ProblemKind::lasso) {
      const Index m = o.m.empty() ? 1000 : o.m.front();
      const Index n = o.n.empty() ? 1500 : o.n.front();
      GeneratedLasso g = generate_lasso(m, n, o.seed, o.rho_fraction);
      if (!o.export_instance.empty()) save_instance(o.export_instance, g.instance);
      desc << "lasso " << m << 'x' << n << " seed " << o.seed;
      out.problem = std::make_unique<LassoInstance>(std::move(g.instance));
    } else {
      const Index n = o.n.empty() ? 300 : o.n.front();
      GeneratedCovsel g = generate_covsel(n, o.seed, o.tau);
      if (!o.export_instance.empty()) save_instance(o.export_instance, g.instance);
      desc << "covsel n=" << n << " seed " << o.seed;
      out.problem = std::make_unique<CovselInstance>(std::move(g.instance));
    }
  }
  out.description = desc.str();
  return out;
}

SolverConfig solver_config(const Options& o, ProblemKind kind, Variant variant) {
  const Tolerance tol =
      tolerances(o, kind == ProblemKind::lasso ? Tolerance{1e-5, 1e-3} : Tolerance{1e-6, 1e-4})
          .front();
  SolverConfig c;
  c.variant = variant;
  c.beta = o.beta;
  c.gamma = o.gamma.value_or(default_gamma(kind));
  c.eps_abs = tol.eps_abs;
  c.eps_rel = tol.eps_rel;
  c.max_iter = o.max_iter;
  c.validate();
  return c;
}

int run_compare(const Options& o) {
  const LoadedProblem lp = load_problem(o);
  std::cout << lp.description << '\n';
  std::vector<SolveResult> results;
  std::vector<Variant> vs = variants(o);
  bool dnf = false;
  std::printf("%-20s %6s %12s %12s %10s\n", "variant", "iter", "primal", "dual", "time_s");
  for (Variant v : vs) {
    const SolverConfig c = solver_config(o, lp.kind, v);
    SolveResult r = run(*lp.problem, c);
    const IterationRecord& last = r.records.back();
    const std::string iters = r.converged ? std::to_string(r.iterations) : "DNF";
    std::printf("%-20s %6s %12.3e %12.3e %10.3f\n", std::string(to_string(v)).c_str(),
                iters.c_str(), last.primal_residual, last.dual_residual, last.elapsed);
    dnf = dnf || !r.converged;
    results.push_back(std::move(r));
  }
  if (!o.out.empty()) {
    std::vector<LabeledRecords> series;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      series.push_back({std::string(to_string(vs[i])), &results[i].records});
    }
    write_file(fs::path(o.out) / "comparison.csv",
               [&](std::ostream& os) { write_comparison_csv(os, series); });
  }
  if (dnf) {
    std::cerr << "warning: at least one variant did not finish (DNF)\n";
    if (o.strict) return kExitDnf;
  }
  return 0;
}

int run_diagnose(const Options& o) {
  const LoadedProblem lp = load_problem(o);
  const Variant variant = o.variants.empty() ? Variant::over_relaxed : parse_variant(o.variants.front());
  const SolverConfig c = solver_config(o, lp.kind, variant);
  std::cout << lp.description << ", variant " << to_string(variant) << ", gamma " << c.gamma
            << ", beta " << c.beta << '\n';
  const EssentialState v_star = reference_solution(*lp.problem, c);
  StepAuditor auditor(*lp.problem, c.beta, c.gamma, v_star);
  const SolveResult r = run(*lp.problem, c, auditor.observer());

  int held = 0;
  for (const IterationRecord& rec : r.records) held += rec.criterion_value >= 0.0 ? 1 : 0;
  const double first = r.records.front().step_change_sq;
  const double last = r.records.back().step_change_sq;
  std::printf("iterations             %d%s\n", r.iterations, r.converged ? "" : " (DNF)");
  std::printf("criterion held         %d of %zu steps\n", held, r.records.size());
  std::printf("monotone violations    %d\n", auditor.monotone_violations());
  std::printf("gap violations         %d\n", auditor.gap_violations());
  std::printf("max correction error   %.3e\n", auditor.max_correction_error());
  std::printf("max hat identity error %.3e\n", auditor.max_hat_identity_error());
  std::printf("max G-form gap         %.3e\n", auditor.max_g_relative_gap());
  std::printf("step change last/first %.3e\n", first > 0.0 ? last / first : 0.0);
  std::printf("kkt residual           %.3e\n", kkt_residual(*lp.problem, r.final));

  if (!o.out.empty()) {
    const fs::path dir = o.out;
    write_file(dir / "diagnostics.csv",
               [&](std::ostream& os) { write_diagnostic_csv(os, auditor.rows()); });
    CellTrajectory t;
    t.variant = variant;
    t.seed = o.seed;
    t.records = r.records;
    t.diagnostics = auditor.rows();
    write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, t); });
  }
  if (o.strict) {
    if (!r.converged) return kExitDnf;
    if (auditor.monotone_violations() + auditor.gap_violations() > 0) return kExitViolation;
  }
  return 0;
}

void add_options(CLI::App& app, Options& o) {
  app.add_option("--m", o.m, "Lasso rows; repeat or list to sweep sizes (paired with --n)");
  app.add_option("--n", o.n, "Lasso columns or covsel dimension");
  app.add_option("--eps-abs", o.eps_abs, "Absolute tolerance(s)")->check(CLI::PositiveNumber);
  app.add_option("--eps-rel", o.eps_rel, "Relative tolerance(s)")->check(CLI::PositiveNumber);
  app.add_option("--variant", o.variants,
                 "classical, over_relaxed, relaxed_customized (default: all; diagnose: "
                 "over_relaxed)");
  app.add_option("--gamma", o.gamma, "Relaxation factor (default 1.8 lasso, 1.7 covsel)");
  app.add_option("--beta", o.beta, "Penalty parameter")->capture_default_str();
  app.add_option("--rho-fraction", o.rho_fraction, "Lasso rho as a fraction of rho_max")
      ->capture_default_str();
  app.add_option("--tau", o.tau, "Covsel l1 weight")->capture_default_str();
  app.add_option("--repeats", o.repeats, "Seeded runs per cell")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed base; run i uses seed + i")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Concurrent cells")->capture_default_str();
  app.add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
  app.add_option("--out", o.out, "Output directory for CSV files");
  app.add_option("--problem", o.problem, "lasso or covsel (compare, diagnose)")
      ->capture_default_str();
  app.add_option("--instance", o.instance, "Load the instance from a file (compare, diagnose)")
      ->check(CLI::ExistingFile);
  app.add_option("--export-instance", o.export_instance,
                 "Save the generated instance (compare, diagnose)");
  app.add_flag("--strict", o.strict, "Nonzero exit on DNF (and on audit violations in diagnose)");
  app.add_flag("--diagnostics", o.diagnostics, "Audit the first-seed trajectory of every cell");
  app.add_flag("--no-time", o.no_time, "Omit wall time from the summary table");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks for classical, over-relaxed and relaxed-customized ADMM"};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  add_options(app, o);
  CLI::App* lasso = app.add_subcommand("lasso", "Lasso benchmark grid");
  CLI::App* covsel = app.add_subcommand("covsel", "Sparse inverse covariance benchmark grid");
  CLI::App* compare = app.add_subcommand("compare", "All variants on one instance");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Audit one solve against a reference");
  CLI11_PARSE(app, argc, argv);

  try {
    if (*lasso) return run_grid(o, ProblemKind::lasso);
    if (*covsel) return run_grid(o, ProblemKind::covsel);
    if (*compare) return run_compare(o);
    if (*diagnose) return run_diagnose(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
