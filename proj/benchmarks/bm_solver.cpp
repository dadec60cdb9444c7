#include <benchmark/benchmark.h>

#include <cmath>

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

// cell updates per second of the two-stage step
void BM_Advance(benchmark::State& state) {
    const std::size_t cells = static_cast<std::size_t>(state.range(0));
    const ModelParams p = bench_params();
    RadialGrid grid;
    grid.h = 0.02;
    grid.cells = cells;
    RadialState st = make_initial_state(p, grid, build_initial_data(p, grid));
    st.dt = 0.5 * grid.h;
    for (auto _ : state) {
        advance(st, p);
        benchmark::DoNotOptimize(st.u.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(cells));
}
BENCHMARK(BM_Advance)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16);

void BM_AdvanceGeneralPower(benchmark::State& state) {
    ModelParams p = bench_params();
    p.pq = {2.3, 1.7};  // exercises the pow path instead of the squaring fast path
    RadialGrid grid;
    grid.h = 0.02;
    grid.cells = 1 << 14;
    RadialState st = make_initial_state(p, grid, build_initial_data(p, grid));
    st.dt = 0.5 * grid.h;
    for (auto _ : state) {
        advance(st, p);
        benchmark::DoNotOptimize(st.u.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * (1 << 14));
}
BENCHMARK(BM_AdvanceGeneralPower);

}  // namespace
