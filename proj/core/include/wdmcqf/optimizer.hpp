#pragma once

#include "wdmcqf/baselines.hpp"
#include "wdmcqf/decision.hpp"
#include "wdmcqf/protocol.hpp"

#include <cstdint>
#include <vector>

namespace wdmcqf {

struct OptimizerSettings {
    double grid_start = 1e-3;         // first candidate mean photon number
    double grid_ratio = 1.05;         // geometric grid step
    double rel_resolution = 0.005;    // bisection stops at this relative width
    double max_pulse_intensity = 5.0; // cap on 2*mu*eta/M (weak-pulse regime)
};

struct OptimizationResult {
    bool feasible = false;
    double mu_star = 0.0;      // smallest feasible per-party mean photon number
    DecisionOutcome decision;  // at mu_star (at the cap when infeasible)
    double q_bits = 0.0;       // one party's fingerprint cost at mu_star
    double q_bits_both = 0.0;  // both parties combined
    double p_equal = 0.0;      // click probabilities at mu_star
    double p_diff = 0.0;
    double mu_cap = 0.0;       // search upper bound that was applied
};

// Smallest mu meeting p_error <= params.error_tolerance under the optimal
// threshold. params.mean_photon_number is ignored. The search walks a
// geometric grid from grid_start to the cap min(m*k, max_pulse_intensity*M/(2*eta)),
// then bisects between the last infeasible and first feasible points to
// rel_resolution. feasible=false reports the outcome at the cap.
OptimizationResult minimize_photon_number(const ProtocolParams& params,
                                          const OptimizerSettings& settings = {});

struct SweepGrid {
    std::vector<std::uint64_t> input_sizes;
    std::vector<std::uint32_t> channel_counts;
    std::vector<double> distances_km;
};

// Parameters held fixed across the sweep.
struct SweepFixed {
    double code_rate = 0.24;
    double code_distance = 0.22;
    double visibility = 0.97;
    double dark_count_prob = 1e-6;
    double error_tolerance = 1e-5;
    double loss_db_per_km = 0.2;
    double detector_efficiency = 0.2;
    OptimizerSettings optimizer;
};

struct SweepRow {
    std::uint64_t input_bits = 0;
    std::uint32_t channel_count = 0;
    double distance_km = 0.0;
    bool feasible = false;
    double mu_star = 0.0;
    std::uint64_t c1_threshold = 0;
    double p_error = 0.0;
    double q_bits = 0.0;            // one party's fingerprint
    double q_bits_both = 0.0;       // both parties combined
    double q_single_channel = 0.0;  // one-party cost of the k=1 optimum, same n/distance
    double classical_best_known = 0.0;
    double classical_limit = 0.0;
    double gamma_c = 0.0;           // classical_best_known / q_bits_both
    double gamma_q = 0.0;           // q_single_channel / q_bits (basis cancels)
};

// One row per (n, k, distance) grid point, ordered n-major, then k, then
// distance. Rows for infeasible points carry feasible=false and NaN costs;
// the sweep never aborts on them. Deterministic for a given grid and
// parameter set regardless of threads.
std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepFixed& fixed,
                            const ClassicalCurve& limit_curve, unsigned threads = 1);

// Geometrically spaced integer grid from lo to hi inclusive: points values
// equally spaced in log10, rounded to the nearest integer, deduplicated
// (so fewer than points values can come back when lo and hi are close).
// Requires 1 <= lo <= hi and points >= 1 (points >= 2 when lo < hi).
std::vector<std::uint64_t> log_spaced_grid(std::uint64_t lo, std::uint64_t hi,
                                           std::size_t points);

} // namespace wdmcqf
