#include <benchmark/benchmark.h>

#include <limits>

#include "reflsm/io.hpp"
#include "reflsm/solver.hpp"
#include "reflsm/synth.hpp"

namespace {

reflsm::ScalarField biased_disk(int n) {
    reflsm::PhantomSpec spec;
    spec.height = n;
    spec.width = n;
    spec.bias = {reflsm::BiasKind::linear_ramp, 0.3};
    return reflsm::to_log_domain(reflsm::generate(spec).image);
}

void BM_OuterIteration(benchmark::State& state) {
    const reflsm::RefLsmSolver solver(biased_disk(static_cast<int>(state.range(0))), {});
    reflsm::SolverState s = solver.initialize();
    reflsm::SolverReport report;
    for (auto _ : state) benchmark::DoNotOptimize(solver.step(s, report));
}
BENCHMARK(BM_OuterIteration)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FullRun30Iterations(benchmark::State& state) {
    const auto image = biased_disk(static_cast<int>(state.range(0)));
    reflsm::SolverParams params;
    params.delta_tol = std::numeric_limits<double>::min();
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::run(image, params));
}
BENCHMARK(BM_FullRun30Iterations)->Arg(256)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
