#include <benchmark/benchmark.h>

#include <random>

#include "reflsm/grid.hpp"
#include "reflsm/spectral.hpp"
#include "reflsm/structural_prior.hpp"

namespace {

reflsm::ScalarField random_field(int n) {
    std::mt19937_64 engine(static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    reflsm::ScalarField f(n, n);
    for (double& v : f.values()) v = dist(engine);
    return f;
}

void BM_Gradient(benchmark::State& state) {
    const auto f = random_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::gradient(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Gradient)->Arg(64)->Arg(256)->Arg(512);

void BM_Laplacian(benchmark::State& state) {
    const auto f = random_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::laplacian(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(256)->Arg(512);

void BM_GaussianConvolve(benchmark::State& state) {
    const auto f = random_field(static_cast<int>(state.range(0)));
    const reflsm::GaussianKernel kernel(3.0);
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::gaussian_convolve(f, kernel));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_GaussianConvolve)->Arg(64)->Arg(256)->Arg(512);

void BM_StructureNormalOperator(benchmark::State& state) {
    const auto f = random_field(static_cast<int>(state.range(0)));
    const reflsm::GaussianKernel kernel(3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reflsm::structure_op_adjoint(reflsm::structure_op(f, kernel), kernel));
    }
}
BENCHMARK(BM_StructureNormalOperator)->Arg(64)->Arg(256);

void BM_CosineTransformRoundTrip(benchmark::State& state) {
    const auto f = random_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::dct2_inverse(reflsm::dct2_forward(f)));
}
BENCHMARK(BM_CosineTransformRoundTrip)->Arg(64)->Arg(256)->Arg(336)->Arg(512);

void BM_SolveHelmholtz(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto rhs = random_field(n);
    const reflsm::NeumannSpectrum spectrum(n, n);
    for (auto _ : state) benchmark::DoNotOptimize(reflsm::solve_helmholtz(rhs, 0.5, 0.1, spectrum));
}
BENCHMARK(BM_SolveHelmholtz)->Arg(64)->Arg(256)->Arg(336);

}  // namespace
