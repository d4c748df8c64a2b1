#include "oradmm/covsel.hpp"
#include "oradmm/engine.hpp"
#include "oradmm/lasso.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <utility>

using namespace oradmm;

namespace {

const GeneratedLasso& lasso_instance(Index m, Index n) {
  static std::map<std::pair<Index, Index>, GeneratedLasso> cache;
  auto it = cache.find({m, n});
  if (it == cache.end()) it = cache.emplace(std::pair{m, n}, generate_lasso(m, n, 1)).first;
  return it->second;
}

const GeneratedCovsel& covsel_instance(Index n) {
  static std::map<Index, GeneratedCovsel> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, generate_covsel(n, 1)).first;
  return it->second;
}

void lasso_sizes(benchmark::internal::Benchmark* b) {
  b->Args({200, 400})->Args({500, 1000})->Args({1000, 1500});
  b->Unit(benchmark::kMicrosecond);
}

void BM_LassoXUpdateWoodbury(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(state.range(0), state.range(1)).instance;
  const Vector y = Vector::Ones(L.cols()), z = Vector::Zero(L.cols());
  L.x_update_woodbury(y, z, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(L.x_update_woodbury(y, z, 1.0));
}
BENCHMARK(BM_LassoXUpdateWoodbury)->Apply(lasso_sizes);

void BM_LassoXUpdateDirect(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(state.range(0), state.range(1)).instance;
  const Vector y = Vector::Ones(L.cols()), z = Vector::Zero(L.cols());
  L.x_update_direct(y, z, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(L.x_update_direct(y, z, 1.0));
}
BENCHMARK(BM_LassoXUpdateDirect)->Apply(lasso_sizes);

void BM_LassoXUpdateRefactor(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(state.range(0), state.range(1)).instance;
  const bool woodbury = state.range(2) != 0;
  const Vector y = Vector::Ones(L.cols()), z = Vector::Zero(L.cols());
  double beta = 1.0;
  for (auto _ : state) {
    beta = beta == 1.0 ? 1.5 : 1.0;
    benchmark::DoNotOptimize(woodbury ? L.x_update_woodbury(y, z, beta)
                                      : L.x_update_direct(y, z, beta));
  }
  state.SetLabel(woodbury ? "woodbury" : "direct");
}
BENCHMARK(BM_LassoXUpdateRefactor)
    ->ArgsProduct({{200, 1000}, {1500}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_LassoYUpdate(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(state.range(0), state.range(1)).instance;
  const Vector x = Vector::LinSpaced(L.cols(), -1.0, 1.0), z = Vector::Zero(L.cols());
  for (auto _ : state) benchmark::DoNotOptimize(L.y_update(x, z, 1.0));
}
BENCHMARK(BM_LassoYUpdate)->Apply(lasso_sizes);

void BM_LassoStep(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(state.range(0), state.range(1)).instance;
  SolverConfig c;
  c.variant = static_cast<Variant>(state.range(2));
  const EssentialState v{Vector::Zero(L.cols()), Vector::Zero(L.cols())};
  step(L, v, c);
  for (auto _ : state) benchmark::DoNotOptimize(step(L, v, c));
  state.SetLabel(std::string(to_string(c.variant)));
}
BENCHMARK(BM_LassoStep)
    ->ArgsProduct({{1000}, {1500}, {0, 1, 2}})
    ->Unit(benchmark::kMicrosecond);

void BM_CovselXUpdate(benchmark::State& state) {
  const CovselInstance& C = covsel_instance(state.range(0)).instance;
  const Matrix Y = Matrix::Identity(C.size(), C.size());
  const Matrix Lambda = Matrix::Zero(C.size(), C.size());
  for (auto _ : state) benchmark::DoNotOptimize(C.x_update(Y, Lambda, 1.0));
}
BENCHMARK(BM_CovselXUpdate)->Arg(50)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_CovselStep(benchmark::State& state) {
  const CovselInstance& C = covsel_instance(state.range(0)).instance;
  SolverConfig c;
  c.gamma = 1.7;
  c.variant = static_cast<Variant>(state.range(1));
  const Index p = C.size() * C.size();
  const EssentialState v{C.flatten(Matrix::Identity(C.size(), C.size())), Vector::Zero(p)};
  for (auto _ : state) benchmark::DoNotOptimize(step(C, v, c));
  state.SetLabel(std::string(to_string(c.variant)));
}
BENCHMARK(BM_CovselStep)->ArgsProduct({{300}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_LassoSolve(benchmark::State& state) {
  const LassoInstance& L = lasso_instance(1000, 1500).instance;
  SolverConfig c;
  c.variant = static_cast<Variant>(state.range(0));
  int iterations = 0;
  for (auto _ : state) iterations = run(L, c).iterations;
  state.counters["iterations"] = iterations;
  state.SetLabel(std::string(to_string(c.variant)));
}
BENCHMARK(BM_LassoSolve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
