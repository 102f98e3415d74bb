// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS to choose the worker count of the parallel variants.

#include "crosp/discrepancy.hpp"
#include "crosp/harmonic.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace crosp;

namespace {

PointSet make_set(const char* space, std::size_t n)
{
    RngStream rng = make_stream(1, 0);
    return sample_uniform(parse_space(space), n, rng);
}

const ExpansionCoeffs& cp2_coeffs()
{
    static const ExpansionCoeffs c(parse_space("cp2"), RadiusMeasure::canonical());
    return c;
}

std::vector<double> theta_grid(std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

void BM_PairSumSerial(benchmark::State& state)
{
    const PointSet set = make_set("cp2", static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(pair_sum_serial(set, Metric::Chordal));
}

void BM_PairSumParallel(benchmark::State& state)
{
    const PointSet set = make_set("cp2", static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(pair_sum(set, Metric::Chordal));
}

void BM_LambdaMcSerial(benchmark::State& state)
{
    const PointSet set = make_set("s2", 100);
    for (auto _ : state)
        benchmark::DoNotOptimize(lambda_mc_serial(set, static_cast<std::uint64_t>(state.range(0)), 7));
}

void BM_LambdaMcParallel(benchmark::State& state)
{
    const PointSet set = make_set("s2", 100);
    for (auto _ : state)
        benchmark::DoNotOptimize(lambda_mc(set, static_cast<std::uint64_t>(state.range(0)), 7));
}

void BM_SymdiffGridSerial(benchmark::State& state)
{
    const ExpansionCoeffs& c = cp2_coeffs();
    const std::vector<double> grid = theta_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(symdiff_series_grid_serial(c, grid, 1e-9));
}

void BM_SymdiffGridParallel(benchmark::State& state)
{
    const ExpansionCoeffs& c = cp2_coeffs();
    const std::vector<double> grid = theta_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(symdiff_series_grid(c, grid, 1e-9));
}

} // namespace

BENCHMARK(BM_PairSumSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairSumParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LambdaMcSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaMcParallel)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SymdiffGridSerial)->Arg(181)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymdiffGridParallel)->Arg(181)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
