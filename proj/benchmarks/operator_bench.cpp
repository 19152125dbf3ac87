#include <benchmark/benchmark.h>

#include <cmath>

#include "orowan/layer.hpp"
#include "orowan/micro.hpp"
#include "orowan/nonlocal.hpp"
#include "orowan/numerics.hpp"

using namespace orowan;

namespace {

ScalarField layer_field(int n) {
    Grid1D g(0.0, 40.0, n);
    return sample_field(g, [](double x) { return nabarro_closed_form(1.0, x); }, 0.0, 1.0, 1.0);
}

ScalarField bump_field(int n) {
    Grid1D g(0.0, 40.0, n);
    return sample_field(g, [](double x) { return std::exp(-x * x / 8.0); }, 0.0, 0.0);
}

void BM_i1_pv_fft(benchmark::State& state) {
    ScalarField f = layer_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(i1_apply(f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_i1_pv_fft)->RangeMultiplier(4)->Range(1024, 16384)->Complexity();

void BM_i1_pv_direct(benchmark::State& state) {
    ScalarField f = layer_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(i1_apply_pv_direct(f));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_i1_pv_direct)->RangeMultiplier(4)->Range(1024, 16384)->Complexity();

void BM_i1_spectral(benchmark::State& state) {
    ScalarField f = bump_field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(i1_apply(f, OperatorBackend::Spectral));
}
BENCHMARK(BM_i1_spectral)->RangeMultiplier(4)->Range(1024, 16384);

void BM_hilbert_pv(benchmark::State& state) {
    ScalarField f = bump_field(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(hilbert_apply(f, OperatorBackend::PvQuadrature));
}
BENCHMARK(BM_hilbert_pv)->RangeMultiplier(4)->Range(1024, 16384);

void BM_micro_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PotentialSpec p = make_classical_potential(1.0);
    Grid1D g(0.0, 8.0, n);
    ScalarField u0 = sample_field(
        g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
    MicroState s = micro_init(u0, 0.1, 0.1);
    const double dt = std::min(micro_dt_stiff(s, p), micro_dt_transport(s));
    MicroOptions opt;
    opt.check_monotone = false;
    for (auto _ : state) {
        s = micro_step(s, p, dt, opt);
        benchmark::DoNotOptimize(s.u.values.data());
    }
}
BENCHMARK(BM_micro_step)->RangeMultiplier(4)->Range(4096, 16384);

void BM_ddd_rhs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = 0.1 * i;
    for (auto _ : state) benchmark::DoNotOptimize(ddd_rhs(y, 1.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ddd_rhs)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_reconstruct(benchmark::State& state) {
    static const LayerProfile layer =
        solve_layer_profile(make_classical_potential(1.0), Grid1D(0.0, 40.0, 2048));
    Grid1D g(0.0, 10.0, static_cast<int>(state.range(0)));
    ScalarField v = sample_field(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
    ParticleSystem ps = level_points(v, 0.05, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(ps, layer, g));
}
BENCHMARK(BM_reconstruct)->RangeMultiplier(4)->Range(1024, 16384);

}  // namespace

BENCHMARK_MAIN();
