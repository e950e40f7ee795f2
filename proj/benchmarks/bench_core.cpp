#include <benchmark/benchmark.h>

#include <random>

#include "azlab/azlab.hpp"

using namespace azlab;

namespace {

Vec seed() {
    Vec x(2);
    x << 0.3, 0.2;
    return x;
}

}  // namespace

static void BM_Orbit(benchmark::State& state) {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    for (auto _ : state) benchmark::DoNotOptimize(orbit(m, seed(), 0, state.range(0)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Orbit)->Arg(10'000)->Arg(100'000);

static void BM_LyapunovQR(benchmark::State& state) {
    const auto m = build_map(pioneer_climax_full_spec(3, 3));
    Vec x(2);
    x << 1, 1;
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov_spectrum_qr(m, x, state.range(0), 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LyapunovQR)->Arg(100'000);

static void BM_LyapunovNormSum(benchmark::State& state) {
    const auto m = build_map(pioneer_climax_full_spec(3, 3));
    Vec x(2);
    x << 1, 1;
    for (auto _ : state) benchmark::DoNotOptimize(max_lyapunov_norm_sum(m, x, state.range(0), 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LyapunovNormSum)->Arg(100'000);

static void BM_BoxCounting(benchmark::State& state) {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    const auto cloud = orbit(m, seed(), 10'000, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(box_counting_dimension(cloud));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BoxCounting)->Arg(100'000)->Arg(1'000'000);

static void BM_FindCycle(benchmark::State& state) {
    const auto m = build_map(pioneer_climax_full_spec(2.398, 2.498));
    const auto tail = orbit(m, seed(), 20'000, 10);
    for (auto _ : state) benchmark::DoNotOptimize(find_cycle(m, 6, tail.point(9)));
}
BENCHMARK(BM_FindCycle);

static void BM_CantorShells(benchmark::State& state) {
    const auto spec = radial_tent_spec(3, 3, 1.0);
    const auto rm = radial_tent_return_map(spec);
    const auto shells = radial_tent_shells(spec);
    for (auto _ : state) benchmark::DoNotOptimize(cantor_shells(rm, shells, static_cast<int>(state.range(0)), 4, 1));
}
BENCHMARK(BM_CantorShells)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Rasterize(benchmark::State& state) {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    const auto cloud = orbit(m, seed(), 1'000, 100'000);
    const auto b = cloud_bounds(cloud);
    for (auto _ : state) benchmark::DoNotOptimize(rasterize(cloud, b, 1024, 1024));
}
BENCHMARK(BM_Rasterize)->Unit(benchmark::kMillisecond);

static void BM_ShiftMetric(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::vector<std::uint8_t> w1(37), w2(41);
    for (auto& d : w1) d = rng() & 1;
    for (auto& d : w2) d = rng() & 1;
    const auto s = periodic_code(w1), t = periodic_code(w2);
    for (auto _ : state) benchmark::DoNotOptimize(shift_metric(s, t));
}
BENCHMARK(BM_ShiftMetric);

BENCHMARK_MAIN();
