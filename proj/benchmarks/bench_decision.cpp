#include "wdmcqf/decision.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

// Threshold search at operating points like the optimizer's inner loop sees:
// equal-side click rate an order of magnitude below the different-side rate.
void threshold_search(benchmark::State& state) {
    const auto pulses = static_cast<std::uint64_t>(state.range(0));
    const double p_equal = 8e-6;
    const double p_diff = 1.1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::optimal_threshold(pulses, p_equal, p_diff));
    }
}
BENCHMARK(threshold_search)->Arg(100000)->Arg(1000000)->Arg(100000000)->Arg(10000000000);

// Small pulse counts with strong per-pulse rates: the regime where the two
// tails cross within a handful of integer thresholds.
void threshold_search_small(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::optimal_threshold(1000, 0.01, 0.2));
    }
}
BENCHMARK(threshold_search_small);

// A single fixed-threshold error evaluation, the primitive under the search.
void error_at_fixed_threshold(benchmark::State& state) {
    const auto pulses = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::error_at_threshold(pulses, 8e-6, 1.1e-4, 4));
    }
}
BENCHMARK(error_at_fixed_threshold)->Arg(100000)->Arg(1000000);

} // namespace
