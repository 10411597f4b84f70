#include <benchmark/benchmark.h>

#include "clockforge/pband.hpp"
#include "clockforge/schur.hpp"
#include "clockforge/solver.hpp"

using namespace clockforge;

namespace {

void bm_p_band(benchmark::State& state) {
    const int n_c = static_cast<int>(state.range(0));
    ClockParams p = ClockParams::equatorial(std::max(n_c, 1), 0.8);
    for (auto _ : state) {
        PBand band = p_band(n_c, p);
        benchmark::DoNotOptimize(band.mu);
    }
    state.SetComplexityN(n_c);
}
BENCHMARK(bm_p_band)->Arg(128)->Arg(1024)->Arg(8192)->Complexity(benchmark::oNSquared);

void bm_schur_distribution(benchmark::State& state) {
    ClockParams p = ClockParams::equatorial(static_cast<int>(state.range(0)), 0.8);
    for (auto _ : state) {
        SchurDistribution dist = schur_distribution(p);
        benchmark::DoNotOptimize(dist.outcomes.back().prob);
    }
}
BENCHMARK(bm_schur_distribution)->Arg(201)->Arg(2001);

void bm_solve_exact_odd(benchmark::State& state) {
    const int n_c = static_cast<int>(state.range(0));
    for (auto _ : state) {
        ProtocolAngles proto = solve_equatorial_odd_exact(n_c, 0.8);
        benchmark::DoNotOptimize(proto.s[1]);
    }
}
BENCHMARK(bm_solve_exact_odd)->Arg(101)->Arg(1001);

void bm_solve_coordinate_ascent(benchmark::State& state) {
    const int n_c = static_cast<int>(state.range(0));
    ClockParams p = ClockParams::equatorial(n_c, 0.8);
    for (auto _ : state) {
        ProtocolAngles proto = solve_optimal(n_c, p);
        benchmark::DoNotOptimize(proto.s[1]);
    }
}
BENCHMARK(bm_solve_coordinate_ascent)->Arg(25)->Arg(101);

void bm_average_infidelity(benchmark::State& state) {
    ClockParams p = ClockParams::equatorial(static_cast<int>(state.range(0)), 0.8);
    for (auto _ : state) {
        AvgInfidelity avg = average_infidelity(p, Family::exact, 1e-12, 1);
        benchmark::DoNotOptimize(avg.value);
    }
}
BENCHMARK(bm_average_infidelity)->Arg(101)->Arg(301);

}  // namespace

BENCHMARK_MAIN();
