// Microbenchmarks for the hot paths: single interferometer evaluations
// (closed form vs tensor simulation), readout sweeps, the weak-value fit,
// visibility sweeps, and synthetic count generation.

#include <benchmark/benchmark.h>

#include <vector>

#include "wvsim/hom.hpp"
#include "wvsim/weakmeas.hpp"

namespace {

using namespace wvsim;

const MeasurementStrength kStrength = MeasurementStrength::from_g(0.29);

std::vector<double> strength_grid(std::size_t n) {
    std::vector<double> grid;
    grid.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        grid.push_back(static_cast<double>(k) / static_cast<double>(n + 1));
    }
    return grid;
}

void BM_RunInterferometerClosed(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_interferometer(-1.0, kStrength));
    }
}
BENCHMARK(BM_RunInterferometerClosed);

void BM_SimulateInterferometerTensor(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_interferometer(-1.0, kStrength));
    }
}
BENCHMARK(BM_SimulateInterferometerTensor);

void BM_ReadoutCurve(benchmark::State& state) {
    const std::vector<double> grid = strength_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(readout_curve(-1.14, grid));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReadoutCurve)->Arg(9)->Arg(99);

void BM_FitWeakValue(benchmark::State& state) {
    const ReadoutCurve curve = readout_curve(-1.14, strength_grid(9));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_weak_value(curve.points));
    }
}
BENCHMARK(BM_FitWeakValue);

void BM_SynthesizeCounts(benchmark::State& state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_counts(-1.0, kStrength, trials, seed++, 0.005));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeCounts)->Arg(10000)->Arg(100000);

void BM_VisibilitySweep(benchmark::State& state) {
    const auto points = static_cast<std::size_t>(state.range(0));
    std::vector<double> grid;
    grid.reserve(points);
    const double lo = kStrength.theta() - 0.3;
    for (std::size_t k = 0; k < points; ++k) {
        grid.push_back(lo + 0.6 * static_cast<double>(k) / static_cast<double>(points - 1));
    }
    const PhotonPairConfig base = standard_pair(-1.0, kStrength);
    for (auto _ : state) {
        benchmark::DoNotOptimize(visibility_sweep(base, grid));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VisibilitySweep)->Arg(801);

}  // namespace

BENCHMARK_MAIN();
