#include "wdmcqf/montecarlo.hpp"
#include "wdmcqf/protocol.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

using wdmcqf::Scenario;

// A 1e5-composite-pulse operating point with per-pulse click rates in the
// 1e-5..1e-4 band, the regime the end-to-end simulations run in.
struct TrialFixture {
    wdmcqf::ProtocolParams params;
    wdmcqf::CodeGeometry geometry;
    wdmcqf::CodewordDiffMask equal_mask;
    wdmcqf::CodewordDiffMask diff_mask;

    TrialFixture() {
        params.input_bits = 144000;
        params.channel_count = 6;
        params.mean_photon_number = 500.0;
        params.visibility = 0.97;
        params.dark_count_prob = 1e-6;
        params.error_tolerance = 1e-5;
        params.channel.distance_km = 0.0;
        params.channel.detector_efficiency = 0.2;
        geometry = wdmcqf::derive_code_geometry(params);
        equal_mask = wdmcqf::build_codeword_pair(params.input_bits, params.code_rate,
                                                 params.code_distance,
                                                 Scenario::equal_inputs, 11);
        diff_mask = wdmcqf::build_codeword_pair(params.input_bits, params.code_rate,
                                                params.code_distance,
                                                Scenario::worst_case_different, 11);
    }
};

const TrialFixture& fixture() {
    static const TrialFixture f;
    return f;
}

// One full protocol trial: per-pulse click sampling over all composite
// pulses plus the verdict. range(0) selects the scenario (0 equal, 1 diff).
void protocol_trial(benchmark::State& state) {
    const auto& f = fixture();
    const auto& mask = state.range(0) == 0 ? f.equal_mask : f.diff_mask;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::simulate_trial(f.params, f.geometry, mask, 4, seed++));
    }
}
BENCHMARK(protocol_trial)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

// Worst-case-different mask construction: distinct-position sampling of the
// code's minimum distance, the per-experiment setup cost.
void codeword_pair_setup(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::build_codeword_pair(
            n, 0.24, 0.22, Scenario::worst_case_different, seed++));
    }
}
BENCHMARK(codeword_pair_setup)->Arg(144000)->Arg(1440000)->Unit(benchmark::kMicrosecond);

// Whole experiment (100 trials) to expose the thread-scaling behavior;
// range(0) is the worker count. Totals are identical across thread counts.
void experiment_batch(benchmark::State& state) {
    const auto& f = fixture();
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::run_experiment(
            f.params, f.geometry, Scenario::worst_case_different, 100, 42, threads));
    }
}
BENCHMARK(experiment_batch)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

} // namespace
