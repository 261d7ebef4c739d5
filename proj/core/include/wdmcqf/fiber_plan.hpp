#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wdmcqf {

struct FiberSegment {
    double length_km = 0.0;
    double dispersion_ps_per_nm_km = 0.0;
};

struct ChannelGrid {
    std::uint32_t count = 1;
    double spacing_nm = 0.0;
};

struct TimingPlan {
    double rep_rate_hz = 0.0;
    double mod_window_ps = 0.0;
};

struct PlanSettings {
    double recombination_tolerance_ps = 50.0;
    double group_delay_us_per_km = 5.0;
};

// Arrival-time separation between adjacent wavelength channels after one
// party's fiber span (their access fiber plus the shared compensating spool).
double arrival_separation(const FiberSegment& smf, const FiberSegment& dcf,
                          double spacing_nm);

// Residual misalignment between the two parties' pulse trains where they
// recombine, accumulated over both access fibers and the compensating spool.
double recombination_offset(const FiberSegment& smf_a, const FiberSegment& smf_b,
                            const FiberSegment& dcf, double spacing_nm);

// How many channels fit in half a repetition period given the per-channel
// separation and the modulator window that must stay clear around each pulse.
std::uint32_t max_channels(const TimingPlan& plan, double per_channel_separation_ps);

struct PlanIssue {
    std::string code;   // stable machine-readable identifier
    std::string detail; // human-readable explanation with the numbers
};

struct PlanReport {
    double separation_a_ps = 0.0;
    double separation_b_ps = 0.0;
    double recombination_offset_ps = 0.0;
    std::uint32_t max_channel_count = 0;
    double collision_clearance_a_ps = 0.0;
    double collision_clearance_b_ps = 0.0;
    bool pass = false;
    std::vector<PlanIssue> issues;
};

// Full timing feasibility check: recombination alignment, channel capacity,
// and modulator collision clearance at both stations.
PlanReport validate_plan(const FiberSegment& smf_a, const FiberSegment& smf_b,
                         const FiberSegment& dcf, const ChannelGrid& grid,
                         const TimingPlan& plan, const PlanSettings& settings = {});

} // namespace wdmcqf
