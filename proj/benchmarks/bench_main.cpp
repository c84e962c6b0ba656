#include "relscatter/kernels.hpp"
#include "relscatter/operators.hpp"
#include "relscatter/partial_wave.hpp"
#include "relscatter/solver.hpp"
#include "relscatter/specfun.hpp"
#include "relscatter/verify.hpp"

#include <benchmark/benchmark.h>

using namespace relscatter;

static void BM_SineCosineComplex(benchmark::State& st) {
    cplx z(3.0, -0.7);
    for (auto _ : st) {
        benchmark::DoNotOptimize(ci_complex(z));
        benchmark::DoNotOptimize(si_complex(z));
        z += 1e-9;
    }
}
BENCHMARK(BM_SineCosineComplex);

static void BM_BoundaryKernel(benchmark::State& st) {
    double r = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(g_boundary_fast(1.0, Sign::plus, r));
        r = r < 50.0 ? r * 1.001 : 0.1;
    }
}
BENCHMARK(BM_BoundaryKernel);

static void BM_BornSweep(benchmark::State& st) {
    auto g = std::make_shared<const BallGrid>(build_ball_grid(4.0, st.range(0), 8));
    BallOperator op(KernelSpec{KernelPart::total, 1.0, Sign::minus}, g);
    std::vector<cplx> u(g->size(), 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(op.apply(u));
}
BENCHMARK(BM_BornSweep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_NystromRadial(benchmark::State& st) {
    auto g = std::make_shared<const RadialGrid>(build_radial_grid(6.0, st.range(0), 12));
    Potential v = make_potential("japanese", 0.05, 4.0);
    for (auto _ : st) benchmark::DoNotOptimize(nystrom_solve_radial(1.0, Sign::plus, v, g));
}
BENCHMARK(BM_NystromRadial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_PartialWave(benchmark::State& st) {
    Potential v = make_potential("japanese", 0.05, 4.0);
    PartialWaveOptions o;
    o.R = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(partial_wave_field({0, 0, 1.0}, Sign::plus, v, o));
}
BENCHMARK(BM_PartialWave)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_SqrtLaplacian(benchmark::State& st) {
    PeriodicBox box(8.0, st.range(0));
    std::vector<cplx> u(box.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-dot(box.point(i), box.point(i)));
    for (auto _ : st) benchmark::DoNotOptimize(sqrt_laplacian_apply(box, u));
}
BENCHMARK(BM_SqrtLaplacian)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
