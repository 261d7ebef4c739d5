#include "wdmcqf/fiber_plan.hpp"

#include "wdmcqf/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace wdmcqf {

namespace {

// collision clearance scans count^2 channel pairings
constexpr std::uint32_t kMaxGridCount = 4096;

void check_segment(const FiberSegment& seg, const char* name) {
    if (!(seg.length_km >= 0.0) || !std::isfinite(seg.length_km))
        throw std::invalid_argument(std::string(name) +
                                    ".length_km: must be finite and nonnegative");
    if (!std::isfinite(seg.dispersion_ps_per_nm_km))
        throw std::invalid_argument(std::string(name) +
                                    ".dispersion_ps_per_nm_km: must be finite");
}

void check_spacing(double spacing_nm) {
    if (!(spacing_nm >= 0.0) || !std::isfinite(spacing_nm))
        throw std::invalid_argument("spacing_nm: must be finite and nonnegative");
}

void check_plan(const TimingPlan& plan) {
    if (!(plan.rep_rate_hz > 0.0) || !std::isfinite(plan.rep_rate_hz))
        throw std::invalid_argument("TimingPlan.rep_rate_hz: must be positive");
    if (!(plan.mod_window_ps >= 0.0) || !std::isfinite(plan.mod_window_ps))
        throw std::invalid_argument("TimingPlan.mod_window_ps: must be nonnegative");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Smallest circular distance between the remote party's pulse train and the
// local modulation slots, over every pairing of local channel i with remote
// channel j. The trains repeat with the source period, so only the phase of
// the length mismatch matters; dispersion fans each train's channels out.
double collision_clearance(const FiberSegment& local, const FiberSegment& remote,
                           const FiberSegment& dcf, const ChannelGrid& grid,
                           double period_ps, double group_delay_ps_per_km) {
    double phase = std::fmod((remote.length_km - (local.length_km + dcf.length_km)) *
                                 group_delay_ps_per_km,
                             period_ps);
    double local_spread = (local.dispersion_ps_per_nm_km * local.length_km +
                           dcf.dispersion_ps_per_nm_km * dcf.length_km) *
                          grid.spacing_nm;
    double remote_spread = remote.dispersion_ps_per_nm_km * remote.length_km * grid.spacing_nm;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < grid.count; ++i) {
        for (std::uint32_t j = 0; j < grid.count; ++j) {
            double x = std::fmod(phase + remote_spread * static_cast<double>(j) -
                                     local_spread * static_cast<double>(i),
                                 period_ps);
            x = std::fabs(x);
            if (x > period_ps / 2.0) x = period_ps - x;
            best = std::min(best, x);
        }
    }
    return best;
}

} // namespace

double arrival_separation(const FiberSegment& smf, const FiberSegment& dcf,
                          double spacing_nm) {
    check_segment(smf, "smf");
    check_segment(dcf, "dcf");
    check_spacing(spacing_nm);
    return std::fabs(spacing_nm * (smf.dispersion_ps_per_nm_km * smf.length_km +
                                   dcf.dispersion_ps_per_nm_km * dcf.length_km));
}

double recombination_offset(const FiberSegment& smf_a, const FiberSegment& smf_b,
                            const FiberSegment& dcf, double spacing_nm) {
    check_segment(smf_a, "smf_a");
    check_segment(smf_b, "smf_b");
    check_segment(dcf, "dcf");
    check_spacing(spacing_nm);
    return std::fabs(spacing_nm * (smf_a.dispersion_ps_per_nm_km * smf_a.length_km +
                                   smf_b.dispersion_ps_per_nm_km * smf_b.length_km +
                                   dcf.dispersion_ps_per_nm_km * dcf.length_km));
}

std::uint32_t max_channels(const TimingPlan& plan, double per_channel_separation_ps) {
    check_plan(plan);
    if (!(per_channel_separation_ps >= 0.0) || !std::isfinite(per_channel_separation_ps))
        throw std::invalid_argument("per_channel_separation_ps: must be finite and nonnegative");
    // both directions share the period, so one train gets half of it
    double half_period = 0.5e12 / plan.rep_rate_hz;
    if (plan.mod_window_ps > half_period) return 0;
    // with no separation, or windows wider than the separation, a second
    // channel would land inside the first one's modulation window
    if (per_channel_separation_ps <= 0.0 || plan.mod_window_ps > per_channel_separation_ps)
        return 1;
    double extra = (half_period - plan.mod_window_ps) / per_channel_separation_ps;
    std::uint64_t total = 1 + floor_snap(extra);
    std::uint64_t limit = std::numeric_limits<std::uint32_t>::max();
    return static_cast<std::uint32_t>(std::min(total, limit));
}

PlanReport validate_plan(const FiberSegment& smf_a, const FiberSegment& smf_b,
                         const FiberSegment& dcf, const ChannelGrid& grid,
                         const TimingPlan& plan, const PlanSettings& settings) {
    check_segment(smf_a, "smf_a");
    check_segment(smf_b, "smf_b");
    check_segment(dcf, "dcf");
    check_plan(plan);
    if (grid.count == 0) throw std::invalid_argument("ChannelGrid.count: must be positive");
    if (grid.count > kMaxGridCount)
        throw std::invalid_argument("ChannelGrid.count: exceeds the supported grid size");
    check_spacing(grid.spacing_nm);
    if (grid.count >= 2 && !(grid.spacing_nm > 0.0))
        throw std::invalid_argument("ChannelGrid.spacing_nm: must be positive for two or more channels");
    if (!(settings.recombination_tolerance_ps >= 0.0) ||
        !std::isfinite(settings.recombination_tolerance_ps))
        throw std::invalid_argument("PlanSettings.recombination_tolerance_ps: must be nonnegative");
    if (!(settings.group_delay_us_per_km > 0.0) || !std::isfinite(settings.group_delay_us_per_km))
        throw std::invalid_argument("PlanSettings.group_delay_us_per_km: must be positive");

    PlanReport report;
    report.separation_a_ps = arrival_separation(smf_a, dcf, grid.spacing_nm);
    report.separation_b_ps = arrival_separation(smf_b, dcf, grid.spacing_nm);
    report.recombination_offset_ps = recombination_offset(smf_a, smf_b, dcf, grid.spacing_nm);
    report.max_channel_count =
        max_channels(plan, std::min(report.separation_a_ps, report.separation_b_ps));

    if (report.recombination_offset_ps > settings.recombination_tolerance_ps)
        report.issues.push_back(
            {"recombination_misaligned",
             "pulse trains recombine " + fmt(report.recombination_offset_ps) +
                 " ps apart, tolerance is " + fmt(settings.recombination_tolerance_ps) +
                 " ps"});

    // a single channel has no neighbor to overlap with, so capacity only
    // binds it when even one channel does not fit
    if (grid.count > report.max_channel_count &&
        (grid.count >= 2 || report.max_channel_count == 0))
        report.issues.push_back(
            {"channel_capacity_exceeded",
             "plan carries " + std::to_string(grid.count) + " channels but the timing fits " +
                 std::to_string(report.max_channel_count)});

    double period_ps = 1e12 / plan.rep_rate_hz;
    bool nothing_in_flight =
        smf_a.length_km == 0.0 && smf_b.length_km == 0.0 && dcf.length_km == 0.0;
    if (nothing_in_flight) {
        // zero fiber anywhere: the trains never coexist in a fiber span, so
        // there is no collision constraint to check
        report.collision_clearance_a_ps = std::numeric_limits<double>::infinity();
        report.collision_clearance_b_ps = std::numeric_limits<double>::infinity();
    } else {
        double tau = settings.group_delay_us_per_km * 1e6; // ps per km
        report.collision_clearance_a_ps =
            collision_clearance(smf_a, smf_b, dcf, grid, period_ps, tau);
        report.collision_clearance_b_ps =
            collision_clearance(smf_b, smf_a, dcf, grid, period_ps, tau);
        if (report.collision_clearance_a_ps < plan.mod_window_ps / 2.0)
            report.issues.push_back(
                {"modulator_collision_at_a",
                 "incoming pulses pass " + fmt(report.collision_clearance_a_ps) +
                     " ps from station A's modulation slots, inside the " +
                     fmt(plan.mod_window_ps / 2.0) + " ps half window"});
        if (report.collision_clearance_b_ps < plan.mod_window_ps / 2.0)
            report.issues.push_back(
                {"modulator_collision_at_b",
                 "incoming pulses pass " + fmt(report.collision_clearance_b_ps) +
                     " ps from station B's modulation slots, inside the " +
                     fmt(plan.mod_window_ps / 2.0) + " ps half window"});
    }
    report.pass = report.issues.empty();
    return report;
}

} // namespace wdmcqf
