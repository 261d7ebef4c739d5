#include "wdmcqf/binomial_tails.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

using wdmcqf::TailQuery;
using wdmcqf::TailRegime;

// Exact summation with the threshold at the mean — the worst case, since the
// converging sum must walk the whole probability bulk.
void exact_tail_at_mean(benchmark::State& state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    const TailQuery q{trials, 1e-2, trials / 100};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::upper_tail(q));
    }
}
BENCHMARK(exact_tail_at_mean)->Arg(1000)->Arg(100000)->Arg(1000000);

// Exact summation far in the tail, where the sum converges in a few terms.
void exact_tail_deep(benchmark::State& state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    const TailQuery q{trials, 1e-5, 30};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::upper_tail(q));
    }
}
BENCHMARK(exact_tail_deep)->Arg(100000)->Arg(1000000);

// Poisson regime: reflected mean 25, probed where the tail is ~1e-5.
void poisson_tail(benchmark::State& state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    const TailQuery q{trials, 25.0 / static_cast<double>(trials), 50};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::upper_tail(q));
    }
}
BENCHMARK(poisson_tail)->Arg(100000000)->Arg(1000000000000);

// Normal regime: mean 2500, threshold about 4.3 sigma out.
void normal_tail(benchmark::State& state) {
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    const TailQuery q{trials, 2500.0 / static_cast<double>(trials), 2714};
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::upper_tail(q));
    }
}
BENCHMARK(normal_tail)->Arg(100000000)->Arg(1000000000000);

// Single log-gamma point mass, the building block of every exact sum.
void binomial_point_mass(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::point_mass(1000000, 1e-4, 120));
    }
}
BENCHMARK(binomial_point_mass);

} // namespace
