#include <benchmark/benchmark.h>

#include "stretchlab/diagnostics.hpp"
#include "stretchlab/exact_solution.hpp"
#include "stretchlab/flow.hpp"
#include "stretchlab/transport.hpp"

using namespace stretchlab;

static void BM_adjugate(benchmark::State& state) {
    Mat3 a{0.3, -0.7, 1.1, 0.9, 0.2, -0.4, -0.5, 0.8, 0.6};
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjugate(a));
    }
}
BENCHMARK(BM_adjugate);

static void BM_holder_evaluate(benchmark::State& state) {
    const HolderRotationField f(0.5);
    Vec3 p{0.37, -0.21, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.evaluate(0.0, p));
    }
}
BENCHMARK(BM_holder_evaluate);

static void BM_holder_jacobian(benchmark::State& state) {
    const HolderRotationField f(0.5);
    Vec3 p{0.37, -0.21, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.jacobian(0.0, p));
    }
}
BENCHMARK(BM_holder_jacobian);

static void BM_exact_solution(benchmark::State& state) {
    const ExactSolution sol(0.5, preset_initial_field("constant_ex"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sol.at_cyl(1.0, {0.25, 1.0, 0.0}));
    }
}
BENCHMARK(BM_exact_solution);

// steps/second of the two integration schemes

static void BM_integrate_rk4(benchmark::State& state) {
    const HolderRotationField f(0.5);
    const auto n = static_cast<std::size_t>(state.range(0));
    const BrownianPath path = sample_brownian(1, 1e-4, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_flow(f, {0.5, 0.0, 0.0}, path, 0.0));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_integrate_rk4)->Arg(1000)->Arg(10000);

static void BM_integrate_euler_maruyama(benchmark::State& state) {
    const HolderRotationField f(0.5);
    const auto n = static_cast<std::size_t>(state.range(0));
    const BrownianPath path = sample_brownian(1, 1e-4, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_flow(f, {0.5, 0.0, 0.0}, path, 0.1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_integrate_euler_maruyama)->Arg(1000)->Arg(10000);

static void BM_variational_jacobian(benchmark::State& state) {
    const HolderRotationField f(0.5);
    const BrownianPath path = sample_brownian(1, 1e-4, 10000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            flow_jacobian(f, {0.5, 0.0, 0.0}, path, 0.1, JacobianMethod::variational));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_variational_jacobian);

static void BM_pullback(benchmark::State& state) {
    const HolderRotationField f(0.5);
    const InitialField b0 = preset_initial_field("constant_ex");
    const auto n = static_cast<std::size_t>(state.range(0));
    const BrownianPath path = sample_brownian(1, 1.0 / static_cast<double>(n), n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pullback_at(b0, f, path, 0.1, 1.0, {0.4, 0.1, 0.0}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_pullback)->Arg(1000)->Arg(10000);

static void BM_sample_brownian(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_brownian(42, 1e-4, 10000));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_sample_brownian);

BENCHMARK_MAIN();
