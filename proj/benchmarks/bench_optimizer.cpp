#include "wdmcqf/baselines.hpp"
#include "wdmcqf/optimizer.hpp"
#include "wdmcqf/protocol.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

wdmcqf::ProtocolParams reference_params(std::uint64_t n, std::uint32_t k, double distance_km) {
    wdmcqf::ProtocolParams p;
    p.input_bits = n;
    p.channel_count = k;
    p.visibility = 0.97;
    p.dark_count_prob = 1e-6;
    p.error_tolerance = 1e-5;
    p.channel.distance_km = distance_km;
    p.channel.loss_db_per_km = 0.2;
    p.channel.detector_efficiency = 0.2;
    return p;
}

// Full photon-number minimization (geometric grid walk plus bisection) at
// representative operating points: {n, channels, distance_km}.
void photon_number_search(benchmark::State& state) {
    const auto params = reference_params(static_cast<std::uint64_t>(state.range(0)),
                                         static_cast<std::uint32_t>(state.range(1)),
                                         static_cast<double>(state.range(2)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::minimize_photon_number(params));
    }
}
BENCHMARK(photon_number_search)
    ->Args({100000, 1, 0})
    ->Args({1440000, 6, 0})
    ->Args({1440000, 6, 20})
    ->Args({1000000000, 100, 40})
    ->Unit(benchmark::kMillisecond);

// One small sweep tile (2 input sizes x 2 channel counts x 2 distances),
// the unit of work the sweep command parallelizes over.
void sweep_tile(benchmark::State& state) {
    wdmcqf::SweepGrid grid;
    grid.input_sizes = {100000, 10000000};
    grid.channel_counts = {1, 100};
    grid.distances_km = {0.0, 20.0};
    const wdmcqf::SweepFixed fixed;
    const wdmcqf::ClassicalCurve curve; // best-known 32*sqrt(n)
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::sweep(grid, fixed, curve, 1));
    }
}
BENCHMARK(sweep_tile)->Unit(benchmark::kMillisecond);

} // namespace
