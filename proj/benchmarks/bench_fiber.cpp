#include "wdmcqf/fiber_plan.hpp"

#include <benchmark/benchmark.h>

namespace {

// The reference link: 20 km access fibers, 6.9 km compensating spool,
// 2.4 nm channel spacing, 6 channels at 50 MHz with an 800 ps window.
struct LinkFixture {
    wdmcqf::FiberSegment smf{20.0, 17.0};
    wdmcqf::FiberSegment dcf{6.9, -99.0};
    wdmcqf::ChannelGrid grid{6, 2.4};
    wdmcqf::TimingPlan plan{50e6, 800.0};
    wdmcqf::PlanSettings settings{50.0, 4.9};
};

void plan_validation(benchmark::State& state) {
    const LinkFixture f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wdmcqf::validate_plan(f.smf, f.smf, f.dcf, f.grid, f.plan, f.settings));
    }
}
BENCHMARK(plan_validation);

void channel_capacity(benchmark::State& state) {
    const LinkFixture f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::max_channels(f.plan, 823.4));
    }
}
BENCHMARK(channel_capacity);

void dispersion_separation(benchmark::State& state) {
    const LinkFixture f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wdmcqf::arrival_separation(f.smf, f.dcf, f.grid.spacing_nm));
    }
}
BENCHMARK(dispersion_separation);

} // namespace
