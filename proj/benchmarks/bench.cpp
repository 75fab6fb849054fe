// Microbenchmarks for the per-step hot paths.

#include <benchmark/benchmark.h>

#include "srn/bohm.hpp"
#include "srn/config.hpp"

using namespace srn;

namespace {

ExperimentConfig bench_cfg(int N) {
    ExperimentConfig cfg;
    cfg.dR = 0.01;
    cfg.N = N;
    cfg.initial = "gaussian";
    cfg.center = 1.5;
    cfg.width = 0.4;
    cfg.vacuum_weight = 0.3;
    return cfg;
}

void BM_TortoiseInverse(benchmark::State& state) {
    const TortoiseMap map(MetricParams{2.0, 1.0, 0.1, 0.5});
    double R = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(map.inverse(R));
        R = R * 1.7 + 1e-8;
        if (R > 10.0) R = 1e-6;
    }
}
BENCHMARK(BM_TortoiseInverse);

void BM_HamiltonianApply(benchmark::State& state) {
    const auto cfg = bench_cfg(int(state.range(0)));
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    MiniFockState s = initial_state(cfg, H);
    for (auto _ : state) benchmark::DoNotOptimize(H.apply(s));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HamiltonianApply)->Range(200, 3200)->Complexity();

void BM_CayleyStep(benchmark::State& state) {
    const auto cfg = bench_cfg(int(state.range(0)));
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    CayleyStepper st(H, 0.005);
    MiniFockState s = initial_state(cfg, H);
    for (auto _ : state) st.step(s);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CayleyStep)->Range(200, 3200)->Complexity();

void BM_VelocityField(benchmark::State& state) {
    const auto cfg = bench_cfg(800);
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    const SectorField f(initial_state(cfg, H), H.grid(), H.map(), H.sector());
    double r = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(velocity_field(f, {r, 1.0, 0.0}));
        r += 0.01;
        if (r > 3.0) r = 0.5;
    }
}
BENCHMARK(BM_VelocityField);

void BM_BoundaryExtraction(benchmark::State& state) {
    const auto cfg = bench_cfg(800);
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    const MiniFockState s = initial_state(cfg, H);
    for (auto _ : state) benchmark::DoNotOptimize(extract_boundary_coeffs(s, H.grid()));
}
BENCHMARK(BM_BoundaryExtraction);

}  // namespace

BENCHMARK_MAIN();
