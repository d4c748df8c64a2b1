#include "oradmm/bench.hpp"

#include "oradmm/covsel.hpp"
#include "oradmm/lasso.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <memory>
#include <limits>
#include <mutex>
#include <optional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace oradmm {

std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::lasso ? "lasso" : "covsel";
}

void BenchmarkSpec::validate() const {
  if (sizes.empty()) throw std::invalid_argument("benchmark: at least one size required");
  if (tolerances.empty()) throw std::invalid_argument("benchmark: at least one tolerance pair");
  if (variants.empty()) throw std::invalid_argument("benchmark: at least one variant");
  if (repeats < 1) throw std::invalid_argument("benchmark: repeats must be at least 1");
  if (jobs < 1) throw std::invalid_argument("benchmark: jobs must be at least 1");
  for (const ProblemSize& s : sizes) {
    if (s.n <= 0 || (problem == ProblemKind::lasso && s.m <= 0)) {
      throw std::invalid_argument("benchmark: sizes must be positive");
    }
    if (problem == ProblemKind::covsel && s.n < 10) {
      throw std::invalid_argument("benchmark: covsel needs n >= 10");
    }
  }
  for (const Tolerance& t : tolerances) {
    if (!(t.eps_abs > 0.0) || !(t.eps_rel > 0.0)) {
      throw std::invalid_argument("benchmark: tolerances must be positive");
    }
  }
  SolverConfig probe;
  probe.beta = beta;
  probe.gamma = gamma;
  probe.max_iter = max_iter;
  for (Variant v : variants) {
    probe.variant = v;
    probe.validate();
  }
}

namespace {

template <typename T, typename Fn>
double mean_of(const std::vector<T>& xs, Fn&& fn) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const T& x : xs) sum += fn(x);
  return sum / static_cast<double>(xs.size());
}

std::unique_ptr<SeparableProblem> make_instance(const BenchmarkSpec& spec, const ProblemSize& size,
                                                std::uint64_t seed) {
  if (spec.problem == ProblemKind::lasso) {
    GeneratedLasso gen = generate_lasso(size.m, size.n, seed, spec.rho_fraction);
    return std::make_unique<LassoInstance>(std::move(gen.instance));
  }
  GeneratedCovsel gen = generate_covsel(size.n, seed, spec.tau);
  return std::make_unique<CovselInstance>(std::move(gen.instance));
}

RunStats summarize(const SolveResult& result, std::uint64_t seed) {
  RunStats s;
  s.seed = seed;
  s.iterations = result.iterations;
  s.converged = result.converged;
  if (!result.records.empty()) {
    const IterationRecord& last = result.records.back();
    s.primal_residual = last.primal_residual;
    s.dual_residual = last.dual_residual;
    s.seconds = last.elapsed;
    s.first_step_change_sq = result.records.front().step_change_sq;
    s.last_step_change_sq = last.step_change_sq;
    const auto held = std::count_if(result.records.begin(), result.records.end(),
                                    [](const IterationRecord& r) {
                                      return !std::isnan(r.criterion_value) &&
                                             r.criterion_value >= 0.0;
                                    });
    s.criterion_fraction =
        static_cast<double>(held) / static_cast<double>(result.records.size());
  }
  return s;
}

}  // namespace

double CellSummary::mean_iterations() const {
  return mean_of(runs, [](const RunStats& r) { return static_cast<double>(r.iterations); });
}

double CellSummary::median_iterations() const {
  if (runs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<int> its;
  its.reserve(runs.size());
  for (const RunStats& r : runs) its.push_back(r.iterations);
  std::sort(its.begin(), its.end());
  const std::size_t n = its.size();
  return n % 2 ? its[n / 2] : 0.5 * (its[n / 2 - 1] + its[n / 2]);
}

int CellSummary::min_iterations() const {
  int out = runs.empty() ? 0 : runs.front().iterations;
  for (const RunStats& r : runs) out = std::min(out, r.iterations);
  return out;
}

int CellSummary::max_iterations() const {
  int out = 0;
  for (const RunStats& r : runs) out = std::max(out, r.iterations);
  return out;
}

double CellSummary::mean_primal_residual() const {
  return mean_of(runs, [](const RunStats& r) { return r.primal_residual; });
}

double CellSummary::mean_dual_residual() const {
  return mean_of(runs, [](const RunStats& r) { return r.dual_residual; });
}

double CellSummary::mean_seconds() const {
  return mean_of(runs, [](const RunStats& r) { return r.seconds; });
}

double CellSummary::mean_criterion_fraction() const {
  return mean_of(runs, [](const RunStats& r) { return r.criterion_fraction; });
}

int CellSummary::dnf() const {
  return static_cast<int>(
      std::count_if(runs.begin(), runs.end(), [](const RunStats& r) { return !r.converged; }));
}

int BenchmarkReport::total_dnf() const {
  int out = 0;
  for (const CellSummary& c : cells) out += c.dnf();
  return out;
}

BenchmarkReport run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();

  BenchmarkReport report;
  report.spec = spec;
  const std::size_t n_tol = spec.tolerances.size();
  const std::size_t n_var = spec.variants.size();
  const std::size_t per_size = n_tol * n_var;
  const auto repeats = static_cast<std::size_t>(spec.repeats);

  for (const ProblemSize& size : spec.sizes) {
    for (const Tolerance& tol : spec.tolerances) {
      for (Variant v : spec.variants) {
        CellSummary cell;
        cell.size = size;
        cell.tolerance = tol;
        cell.variant = v;
        cell.runs.resize(repeats);
        report.cells.push_back(std::move(cell));
        CellTrajectory traj;
        traj.size = size;
        traj.tolerance = tol;
        traj.variant = v;
        traj.seed = spec.seed_base;
        report.trajectories.push_back(std::move(traj));
      }
    }
  }

  // One task per (size, seed); each task owns its instance and writes only
  // its own preallocated slots.
  const std::size_t n_tasks = spec.sizes.size() * repeats;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      try {
        const std::size_t size_idx = task / repeats;
        const std::size_t rep = task % repeats;
        const std::uint64_t seed = spec.seed_base + rep;
        const auto problem = make_instance(spec, spec.sizes[size_idx], seed);

        for (std::size_t t = 0; t < n_tol; ++t) {
          std::optional<EssentialState> v_star;
          for (std::size_t vi = 0; vi < n_var; ++vi) {
            const std::size_t cell_idx = size_idx * per_size + t * n_var + vi;
            SolverConfig config;
            config.variant = spec.variants[vi];
            config.beta = spec.beta;
            config.gamma = spec.gamma;
            config.eps_abs = spec.tolerances[t].eps_abs;
            config.eps_rel = spec.tolerances[t].eps_rel;
            config.max_iter = spec.max_iter;

            const SolveResult result = run(*problem, config);
            report.cells[cell_idx].runs[rep] = summarize(result, seed);
            if (rep != 0) continue;

            CellTrajectory& traj = report.trajectories[cell_idx];
            traj.records = result.records;
            if (spec.diagnostics) {
              if (!v_star) v_star = reference_solution(*problem, config);
              StepAuditor auditor(*problem, spec.beta, spec.gamma, v_star);
              run(*problem, config, auditor.observer());
              traj.diagnostics = auditor.rows();
            }
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), std::max<std::size_t>(1, n_tasks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return report;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("failed to format number");
  return std::string(buf.data(), end);
}

void write_summary_csv(std::ostream& os, const BenchmarkReport& report) {
  os << "problem,m,n,eps_abs,eps_rel,variant,repeats,mean_iterations,median_iterations,"
        "min_iterations,max_iterations,mean_primal_residual,mean_dual_residual,"
        "criterion_fraction,dnf\n";
  const std::string problem(to_string(report.spec.problem));
  for (const CellSummary& c : report.cells) {
    const Index m = report.spec.problem == ProblemKind::lasso ? c.size.m : c.size.n;
    os << problem << ',' << m << ',' << c.size.n << ',' << format_number(c.tolerance.eps_abs)
       << ',' << format_number(c.tolerance.eps_rel) << ',' << to_string(c.variant) << ','
       << c.runs.size() << ',' << format_number(c.mean_iterations()) << ','
       << format_number(c.median_iterations()) << ',' << c.min_iterations() << ','
       << c.max_iterations() << ',' << format_number(c.mean_primal_residual()) << ','
       << format_number(c.mean_dual_residual()) << ','
       << format_number(c.mean_criterion_fraction()) << ',' << c.dnf() << '\n';
  }
}

std::string format_summary_table(const BenchmarkReport& report, bool with_time) {
  const BenchmarkSpec& spec = report.spec;
  const bool lasso = spec.problem == ProblemKind::lasso;
  const std::size_t n_var = spec.variants.size();
  constexpr int kIter = 8;
  constexpr int kRes = 11;
  constexpr int kTime = 8;
  const int group = kIter + 2 * kRes + (with_time ? kTime : 0);

  std::ostringstream os;
  os << std::left << std::setw(lasso ? 12 : 6) << (lasso ? "m x n" : "n") << std::setw(16)
     << "eps (abs,rel)";
  for (Variant v : spec.variants) os << " | " << std::setw(group) << to_string(v);
  os << '\n' << std::setw(lasso ? 12 : 6) << "" << std::setw(16) << "";
  for (std::size_t i = 0; i < n_var; ++i) {
    os << " | " << std::right << std::setw(kIter) << "Iter." << std::setw(kRes) << "|r|"
       << std::setw(kRes) << "|s|";
    if (with_time) os << std::setw(kTime) << "Time";
    os << std::left;
  }
  os << '\n';

  for (std::size_t c = 0; c < report.cells.size(); c += n_var) {
    const CellSummary& first = report.cells[c];
    std::ostringstream label;
    if (lasso) label << first.size.m << " x " << first.size.n;
    else label << first.size.n;
    std::ostringstream tol;
    tol << std::setprecision(0) << std::scientific << first.tolerance.eps_abs << ','
        << first.tolerance.eps_rel;
    os << std::left << std::setw(lasso ? 12 : 6) << label.str() << std::setw(16) << tol.str();
    for (std::size_t i = 0; i < n_var; ++i) {
      const CellSummary& cell = report.cells[c + i];
      std::ostringstream iters;
      iters << std::fixed << std::setprecision(1) << cell.mean_iterations();
      if (cell.dnf() > 0) iters.str("DNF");
      os << " | " << std::right << std::setw(kIter) << iters.str() << std::scientific
         << std::setprecision(2) << std::setw(kRes) << cell.mean_primal_residual()
         << std::setw(kRes) << cell.mean_dual_residual();
      if (with_time) os << std::fixed << std::setw(kTime) << cell.mean_seconds();
      os << std::left << std::defaultfloat;
    }
    os << '\n';
  }
  return os.str();
}

void write_trajectory_csv(std::ostream& os, const CellTrajectory& trajectory) {
  const bool diag = !trajectory.diagnostics.empty();
  os << "k,primal_residual,dual_residual,criterion_value,relaxed";
  if (diag) os << ",h_dist_sq";
  os << '\n';
  for (std::size_t i = 0; i < trajectory.records.size(); ++i) {
    const IterationRecord& r = trajectory.records[i];
    os << r.k << ',' << format_number(r.primal_residual) << ','
       << format_number(r.dual_residual) << ',' << format_number(r.criterion_value) << ','
       << (r.relaxed ? 1 : 0);
    if (diag) {
      os << ',';
      if (i < trajectory.diagnostics.size()) {
        os << format_number(trajectory.diagnostics[i].h_dist_sq);
      }
    }
    os << '\n';
  }
}

void write_comparison_csv(std::ostream& os, const std::vector<LabeledRecords>& series) {
  constexpr double kFloor = 1e-300;
  std::size_t rows = 0;
  os << 'k';
  for (const LabeledRecords& s : series) {
    os << ',' << s.label << "_primal," << s.label << "_dual";
    rows = std::max(rows, s.records ? s.records->size() : 0);
  }
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    os << i + 1;
    for (const LabeledRecords& s : series) {
      if (s.records && i < s.records->size()) {
        const IterationRecord& r = (*s.records)[i];
        os << ',' << format_number(std::max(r.primal_residual, kFloor)) << ','
           << format_number(std::max(r.dual_residual, kFloor));
      } else {
        os << ",,";
      }
    }
    os << '\n';
  }
}

void write_diagnostic_csv(std::ostream& os, const std::vector<DiagnosticRow>& rows) {
  os << "k,h_dist_sq,g_norm_sq,g_norm_expanded,criterion_value,relaxed,correction_error,"
        "hat_identity_error,monotone_violation,gap_violation\n";
  for (const DiagnosticRow& r : rows) {
    os << r.k << ',' << format_number(r.h_dist_sq) << ',' << format_number(r.g_norm_sq) << ','
       << format_number(r.g_norm_expanded) << ',' << format_number(r.criterion_value) << ','
       << (r.relaxed ? 1 : 0) << ',' << format_number(r.correction_error) << ','
       << format_number(r.hat_identity_error) << ',' << (r.monotone_violation ? 1 : 0) << ','
       << (r.gap_violation ? 1 : 0) << '\n';
  }
}

}  // namespace oradmm
