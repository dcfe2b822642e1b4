#include <benchmark/benchmark.h>

#include "s3bs/identities.hpp"

using namespace s3bs;

namespace {

QuadratureSpec spec(std::size_t n, Backend b = Backend::monte_carlo) {
    QuadratureSpec s;
    s.backend = b;
    s.n_samples = n;
    return s;
}

const Point kProbe = Point(Vec4{0.6, 0.8, 0.1, 0.3});

void BM_PolarTemplate(benchmark::State& state) {
    const QuadratureSpec s = spec(state.range(0), static_cast<Backend>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(polar_template(s, Exec{1}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolarTemplate)->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);

void BM_VolumeSampling(benchmark::State& state) {
    const Domain torus = Domain::solid_torus(0.5);
    const QuadratureSpec s = spec(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(torus.sample_volume(s, Exec{1}));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VolumeSampling)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Kernel(benchmark::State& state) {
    const BiotSavart bs(frame_field(1), Domain::full_sphere(), spec(1000), {static_cast<BSMethod>(state.range(0))},
                        Exec{1});
    const Vec4 y = kProbe.coords();
    const Point x(Vec4{0.1, 0.2, 0.9, -0.3});
    const Vec4 vx = frame_field(1)(x).vec;
    for (auto _ : state) benchmark::DoNotOptimize(bs.kernel_at(y, x.coords(), vx));
}
BENCHMARK(BM_Kernel)->Arg(0)->Arg(1);

// Template construction is amortised: each iteration evaluates one probe.
void BM_BSEvaluate(benchmark::State& state) {
    const BiotSavart bs(frame_field(1), Domain::solid_torus(0.5), spec(state.range(0)),
                        {static_cast<BSMethod>(state.range(1))}, Exec{1});
    for (auto _ : state) benchmark::DoNotOptimize(bs.evaluate(kProbe));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BSEvaluate)->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);

void BM_CurlBS(benchmark::State& state) {
    const BiotSavart bs(frame_field(1), Domain::solid_torus(0.5), spec(state.range(0)), {}, Exec{1});
    for (auto _ : state) benchmark::DoNotOptimize(bs.curl(kProbe, kIntegralFD));
}
BENCHMARK(BM_CurlBS)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_KeyLemma(benchmark::State& state) {
    const Point x(Vec4{1.0, 0.2, -0.1, 0.3});
    const TangentVector v(x, Vec4{0.1, 0.4, -0.2, 0.3});
    for (auto _ : state) benchmark::DoNotOptimize(key_lemma_residual(x, kProbe, v));
}
BENCHMARK(BM_KeyLemma);

void BM_Helicity(benchmark::State& state) {
    DoubleSpec d;
    d.outer = spec(state.range(0));
    d.inner = spec(state.range(0));
    d.inner.seed = 2;
    for (auto _ : state) benchmark::DoNotOptimize(helicity(frame_field(1), Domain::full_sphere(), d, {}, Exec{1}));
}
BENCHMARK(BM_Helicity)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
