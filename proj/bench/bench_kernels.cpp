// Serial reference vs OpenMP path for the grid kernels. Run with
// OMP_NUM_THREADS set to compare scaling; both paths produce identical output.

#include <benchmark/benchmark.h>

#include <numbers>

#include "sqz/cavity.hpp"
#include "sqz/control.hpp"
#include "sqz/detection.hpp"
#include "sqz/opo.hpp"

using namespace sqz;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

CavityParams mode_cleaner() {
    const double r = reflectivity_for_finesse(555.0);
    return CavityParams{r, r, 0.0, {{kSpeedOfLight / 721.5e6, 1.0}}, CavityGeometry::traveling_wave};
}

void BM_Spectrum(benchmark::State& state) {
    const CavityParams sq{0.92, 1.0, 0.0, {{0.010, kKtpIndex1064}, {0.020, 1.0}}};
    const OpoParams p{0.68, decay_rate(sq), 0.955};
    SynthesisOptions opts;
    opts.f_lo_hz = 1.0;
    opts.f_hi_hz = 1e8;
    opts.points_per_decade = static_cast<int>(state.range(1));
    const auto src = [&](double f) { return squeezing_spectrum(p, 2 * std::numbers::pi * f); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_spectrum(src, HomodyneParams{}, opts, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * (8 * state.range(1) + 1));
}
BENCHMARK(BM_Spectrum)->ArgsProduct({{0, 1}, {500, 5000}})->ArgNames({"parallel", "ppd"})->UseRealTime();

void BM_PdhTrace(benchmark::State& state) {
    const auto c = mode_cleaner();
    const auto grid = linear_grid(-fsr(c), fsr(c), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdh_trace(c, grid, 120e6, 0.5, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_PdhTrace)->ArgsProduct({{0, 1}, {10'000, 200'000}})->ArgNames({"parallel", "points"})->UseRealTime();

void BM_PumpPhaseTrace(benchmark::State& state) {
    const OpoParams p{0.68, 1.6e8, 0.955};
    const auto grid = linear_grid(-std::numbers::pi, std::numbers::pi, static_cast<std::size_t>(state.range(1)));
    const Demodulation demod{2, pump_phase_default_demod(p, 15.2e6)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pump_phase_trace(p, 15.2e6, grid, demod, mode(state)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_PumpPhaseTrace)->ArgsProduct({{0, 1}, {10'000, 200'000}})->ArgNames({"parallel", "points"})->UseRealTime();

void BM_ResidualJitter(benchmark::State& state) {
    const LoopConfig loop{6e3, 1, 15.2e6, 2, std::nullopt};
    const WhitePlusFlicker noise;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_residual_jitter(noise, loop, 1.0, 1e6, mode(state)));
    }
}
BENCHMARK(BM_ResidualJitter)->Arg(0)->Arg(1)->ArgName("parallel")->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
