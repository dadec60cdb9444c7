#include <benchmark/benchmark.h>

#include "siwave/functionals.hpp"
#include "siwave/solver.hpp"

namespace {

using namespace siwave;

ModelParams bench_params() {
    ModelParams p;
    p.N = 1;
    p.mu1.mu = 0.5;
    p.mu2.mu = 0.5;
    p.pq = {2.0, 2.0};
    p.eps = 0.1;
    return p;
}

// one full sampling row (all functionals plus the nonlinear integrals)
void BM_SampleRow(benchmark::State& state) {
    const ModelParams p = bench_params();
    RadialGrid grid;
    grid.h = 0.02;
    grid.cells = static_cast<std::size_t>(state.range(0));
    const FunctionalEvaluator eval(p, grid);
    RadialState st = make_initial_state(p, grid, build_initial_data(p, grid));
    st.t = 3.0;
    for (auto _ : state) {
        FunctionalSeries series;
        eval.sample(st, series);
        benchmark::DoNotOptimize(series.G1.data());
    }
}
BENCHMARK(BM_SampleRow)->Arg(1 << 12)->Arg(1 << 15);

void BM_PsiPowerIntegral(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(psi_power_integral(1.0, 2, 2.0, 10.0, 1.0));
}
BENCHMARK(BM_PsiPowerIntegral);

}  // namespace
