#include <benchmark/benchmark.h>

#include "sblfem/sblfem.hpp"

using namespace sblfem;

namespace {

ProblemSpec example1() { return make_registry_problem("example1", 1e-9, 1e-4); }

void BM_GaussRule(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gauss_rule(n));
}
BENCHMARK(BM_GaussRule)->Arg(8)->Arg(32)->Arg(200);

void BM_LayerParameters(benchmark::State& state) {
    const ProblemSpec problem = make_registry_problem("example2", 1e-9, 1e-4);
    for (auto _ : state) benchmark::DoNotOptimize(compute_layer_parameters(problem));
}
BENCHMARK(BM_LayerParameters);

void BM_AssembleSolve(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const ProblemSpec problem = example1();
    const Mesh mesh = build_sbl_mesh(compute_layer_parameters(problem), 1.0, p);
    for (auto _ : state) {
        const GlobalSystem sys = assemble_global(problem, mesh, p);
        benchmark::DoNotOptimize(solve_linear(sys));
    }
    state.counters["dof"] = 3 * p - 1;
}
BENCHMARK(BM_AssembleSolve)->DenseRange(1, 11, 5)->Arg(40);

void BM_EnergyError(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const ProblemSpec problem = example1();
    const DiscreteSolution sol = solve_fem(problem, build_sbl_mesh(compute_layer_parameters(problem), 1.0, p), p);
    const Field exact = as_field(constant_coefficient_exact(problem));
    for (auto _ : state) benchmark::DoNotOptimize(energy_norm_error(exact, sol, problem.eps1()));
}
BENCHMARK(BM_EnergyError)->Arg(1)->Arg(11);

void BM_Sweep(benchmark::State& state) {
    SweepConfig cfg;
    cfg.pairs = canonical_pairs();
    cfg.threads = static_cast<int>(state.range(0));
    cfg.record_timing = false;
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
