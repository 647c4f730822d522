#include <benchmark/benchmark.h>

#include "c0ip/assembly.hpp"
#include "c0ip/jets.hpp"
#include "c0ip/solver.hpp"

using namespace c0ip;

namespace {

ProblemSpec spec_for(int m, int r, double tau) {
  ProblemSpec s;
  s.m = m;
  s.r = r;
  s.dim = 2;
  s.tau = tau;
  return s;
}

// Args: m, r, n.
void BM_AssembleMatrix(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), r = static_cast<int>(state.range(1));
  const ProblemSpec spec = spec_for(m, r, 1.0);
  const Discretization disc(build_unit_square_mesh(static_cast<int>(state.range(2))), r, m - 1, m);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix(spec, disc));
  state.counters["dofs"] = disc.dofs().num_dofs;
}
BENCHMARK(BM_AssembleMatrix)->Args({2, 2, 32})->Args({3, 3, 32})->Args({4, 4, 16})->Unit(benchmark::kMillisecond);

void BM_AssembleLoad(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), r = static_cast<int>(state.range(1));
  const ProblemSpec spec = spec_for(m, r, 1.0);
  const Discretization disc(build_unit_square_mesh(static_cast<int>(state.range(2))), r, m - 1, m);
  const ExactSolution u = make_sine_product(2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_load(spec, disc, u));
}
BENCHMARK(BM_AssembleLoad)->Args({2, 2, 32})->Args({3, 3, 32})->Unit(benchmark::kMillisecond);

// Args: m, r, n, direct (1) or cg (0). tau = 10 keeps the system positive definite.
void BM_Solve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0)), r = static_cast<int>(state.range(1));
  const ProblemSpec spec = spec_for(m, r, 10.0);
  const Discretization disc(build_unit_square_mesh(static_cast<int>(state.range(2))), r, m - 1, m);
  LinearSystem sys = assemble_system(spec, disc, make_sine_product(2));
  const ReducedSystem red = eliminate_constraints(sys);
  SolverOptions opt;
  opt.method = state.range(3) ? SolverMethod::kDirect : SolverMethod::kCG;
  SolveReport rep;
  for (auto _ : state) benchmark::DoNotOptimize(solve(red.A, red.b, opt, rep));
  state.counters["dofs"] = red.A.rows();
  state.counters["residual"] = rep.relative_residual;
}
BENCHMARK(BM_Solve)->Args({2, 2, 32, 1})->Args({2, 2, 32, 0})->Args({3, 3, 32, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
