#include <benchmark/benchmark.h>

#include "orlicz/conjugate.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/solver.hpp"

using namespace orlicz;

namespace {

void BM_NumericConjugate(benchmark::State& state) {
    const auto phi = make_exponential(2);
    ConjugateConfig cfg;
    cfg.cache_enabled = false;
    const auto star = conjugate(phi, cfg);
    double z = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(star.eval({z, 0.3 * z}));
        z = z < 50.0 ? z + 0.05 : 0.1;
    }
}
BENCHMARK(BM_NumericConjugate);

void BM_LuxemburgNorm(benchmark::State& state) {
    const auto phi = make_power(2.0, 2);
    const auto u = random_bandlimited(1.0, state.range(0), 2, 3, 0.4, 42);
    for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(phi, u));
}
BENCHMARK(BM_LuxemburgNorm)->Arg(128)->Arg(512)->Arg(2048);

void BM_ActionGradient(benchmark::State& state) {
    ProblemSpec spec;
    spec.dim = 1;
    spec.period = 1.0;
    spec.n = state.range(0);
    spec.phi = make_power(3.0, 1);
    TrigPoly f;
    f.period = 1.0;
    f.a0 = {0.0};
    f.a = {{0.0}};
    f.b = {{-1.0}};
    spec.potential = make_quadratic_forcing(f, 1.0);
    const auto u = random_bandlimited(1.0, spec.n, 1, 3, 0.4, 7);
    for (auto _ : state) benchmark::DoNotOptimize(discrete_action_gradient(spec, u));
}
BENCHMARK(BM_ActionGradient)->Arg(128)->Arg(512)->Arg(2048);

void BM_HarmonicSolve(benchmark::State& state) {
    ProblemSpec spec;
    spec.dim = 1;
    spec.period = 1.0;
    spec.n = state.range(0);
    spec.phi = make_power(2.0, 1);
    TrigPoly f;
    f.period = 1.0;
    f.a0 = {0.0};
    f.a = {{0.0}};
    f.b = {{-1.0}};
    spec.potential = make_quadratic_forcing(f, 1.0);
    spec.solver.c_res = 100.0;  // skip calibration inside the timing loop
    for (auto _ : state) benchmark::DoNotOptimize(minimize(spec));
}
BENCHMARK(BM_HarmonicSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
