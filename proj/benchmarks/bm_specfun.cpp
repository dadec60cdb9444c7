#include <benchmark/benchmark.h>

#include "siwave/specfun.hpp"

namespace {

void BM_BesselKScaled(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(siwave::modified_bessel_k_scaled(0.75, t));
}
BENCHMARK(BM_BesselKScaled)->Arg(1)->Arg(10)->Arg(100)->Arg(1000);

void BM_PhiScaled(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const double r = static_cast<double>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(siwave::phi_radial_scaled(N, r));
}
BENCHMARK(BM_PhiScaled)->Args({2, 1})->Args({2, 100})->Args({3, 1})->Args({3, 100});

void BM_Rho(benchmark::State& state) {
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(siwave::rho_scaled(0.5, t));
}
BENCHMARK(BM_Rho)->Arg(1)->Arg(50);

void BM_GammaCoeff(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(siwave::gamma_coeff(1.5, 3.0));
}
BENCHMARK(BM_GammaCoeff);

}  // namespace
