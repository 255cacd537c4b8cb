// Serial reference loops against the OpenMP kernels on the N x N mesh.
#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "supg/assembly.hpp"
#include "supg/benchmarks.hpp"
#include "supg/error_indicator.hpp"
#include "supg/stabilization.hpp"
#include "supg/trainer.hpp"

using namespace supg;

namespace {

Execution exec_of(const benchmark::State& s) { return s.range(1) == 0 ? Execution::serial : Execution::parallel; }

struct Fixture {
  ProblemSpec problem = example(ExampleId::ex2);
  SpacePtr space;
  FeFunction u;

  explicit Fixture(int n) : space(make_space(n)) {
    const SupgOperator op(problem, space);
    const TauField tau = TauField::constant(space->n_cells(), tau_standard(problem.epsilon, problem.b, space->h()));
    u = op.solve(&tau);
  }
};

const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

void label(benchmark::State& s) {
  s.SetLabel(exec_of(s) == Execution::serial ? "serial" : "omp x" + std::to_string(max_threads()));
  s.SetItemsProcessed(s.iterations() * 2 * s.range(0) * s.range(0));
}

void BM_CellBlocks(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(compute_cell_blocks(f.problem, *f.space, exec_of(s)));
  label(s);
}

void BM_GradientNorms(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(gradient_norms(f.u, exec_of(s)));
  label(s);
}

void BM_TotalCost(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(total_cost(f.u, f.problem, exec_of(s)));
  label(s);
}

void BM_CostGradient(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(cost_gradient_wrt_u(f.u, f.problem, exec_of(s)));
  label(s);
}

void BM_ErrorMetrics(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(compute_errors(f.u, f.problem, exec_of(s)));
  label(s);
}

void BM_TrainingEpoch(benchmark::State& s) {
  const Fixture& f = fixture(static_cast<int>(s.range(0)));
  const SupgOperator op(f.problem, f.space, exec_of(s));
  const std::vector<double> tau(f.space->n_cells(), tau_standard(f.problem.epsilon, f.problem.b, f.space->h()));
  for (auto _ : s) benchmark::DoNotOptimize(evaluate_cost_and_gradient(op, tau, exec_of(s)));
  label(s);
}

void mesh_args(benchmark::internal::Benchmark* b) {
  for (int n : {20, 40, 80}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_CellBlocks)->Apply(mesh_args);
BENCHMARK(BM_GradientNorms)->Apply(mesh_args);
BENCHMARK(BM_TotalCost)->Apply(mesh_args);
BENCHMARK(BM_CostGradient)->Apply(mesh_args);
BENCHMARK(BM_ErrorMetrics)->Apply(mesh_args);
BENCHMARK(BM_TrainingEpoch)->Apply(mesh_args);

BENCHMARK_MAIN();
