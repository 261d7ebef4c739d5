#include "wdmcqf/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wdmcqf {

namespace {

struct PointEval {
    double p_equal = 0.0;
    double p_diff = 0.0;
    DecisionOutcome decision;
};

PointEval eval_at_mu(const ProtocolParams& base, const CodeGeometry& geometry, double mu) {
    ProtocolParams p = base;
    p.mean_photon_number = mu;
    PointEval e;
    e.p_equal = click_prob_equal(p, geometry);
    e.p_diff = click_prob_diff(p, geometry);
    e.decision = optimal_threshold(geometry.pulse_count, e.p_equal, e.p_diff);
    return e;
}

void fill_point(OptimizationResult& res, const PointEval& e, double mu,
                std::uint64_t codeword_bits) {
    res.mu_star = mu;
    res.decision = e.decision;
    res.p_equal = e.p_equal;
    res.p_diff = e.p_diff;
    if (mu <= static_cast<double>(codeword_bits)) {
        res.q_bits = fingerprint_cost(mu, codeword_bits);
        res.q_bits_both = 2.0 * res.q_bits;
    } else {
        // denser than one photon per mode: outside the cost model's domain
        res.q_bits = std::numeric_limits<double>::quiet_NaN();
        res.q_bits_both = std::numeric_limits<double>::quiet_NaN();
    }
}

void run_indexed(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto drain = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

OptimizationResult minimize_photon_number(const ProtocolParams& params,
                                          const OptimizerSettings& settings) {
    params.validate();
    if (!(settings.grid_start > 0.0) || !std::isfinite(settings.grid_start))
        throw std::invalid_argument("OptimizerSettings.grid_start: must be positive");
    if (!(settings.grid_ratio > 1.0) || !std::isfinite(settings.grid_ratio))
        throw std::invalid_argument("OptimizerSettings.grid_ratio: must exceed 1");
    if (!(settings.rel_resolution > 0.0) || !(settings.rel_resolution < 1.0))
        throw std::invalid_argument("OptimizerSettings.rel_resolution: must lie in (0, 1)");
    if (!(settings.max_pulse_intensity > 0.0))
        throw std::invalid_argument("OptimizerSettings.max_pulse_intensity: must be positive");

    CodeGeometry geometry = derive_code_geometry(params);
    double eta = transmittance(params.channel);
    double modes = static_cast<double>(geometry.codeword_bits);
    double cap = std::min(modes * static_cast<double>(params.channel_count),
                          settings.max_pulse_intensity *
                              static_cast<double>(geometry.pulse_count) / (2.0 * eta));
    OptimizationResult res;
    res.mu_cap = cap;
    double eps = params.error_tolerance;

    // mu = 0 collapses both click rates to the dark floor; it only satisfies
    // near-vacuous tolerances, but costs nothing to check
    PointEval zero = eval_at_mu(params, geometry, 0.0);
    if (zero.decision.p_error <= eps) {
        res.feasible = true;
        fill_point(res, zero, 0.0, geometry.codeword_bits);
        return res;
    }

    double lo = 0.0;
    double hi = std::numeric_limits<double>::quiet_NaN();
    PointEval at_hi;
    double mu = std::min(settings.grid_start, cap);
    while (true) {
        PointEval e = eval_at_mu(params, geometry, mu);
        if (e.decision.p_error <= eps) {
            hi = mu;
            at_hi = e;
            break;
        }
        lo = mu;
        if (mu >= cap) {
            res.feasible = false;
            fill_point(res, e, cap, geometry.codeword_bits);
            return res;
        }
        mu = std::min(mu * settings.grid_ratio, cap);
    }
    while (hi - lo > settings.rel_resolution * hi) {
        double mid = 0.5 * (lo + hi);
        PointEval e = eval_at_mu(params, geometry, mid);
        if (e.decision.p_error <= eps) {
            hi = mid;
            at_hi = e;
        } else {
            lo = mid;
        }
    }
    res.feasible = true;
    fill_point(res, at_hi, hi, geometry.codeword_bits);
    return res;
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepFixed& fixed,
                            const ClassicalCurve& limit_curve, unsigned threads) {
    if (grid.input_sizes.empty() || grid.channel_counts.empty() || grid.distances_km.empty())
        throw std::invalid_argument("sweep: every grid dimension needs at least one value");

    const std::size_t n_count = grid.input_sizes.size();
    const std::size_t k_count = grid.channel_counts.size();
    const std::size_t d_count = grid.distances_km.size();

    auto params_for = [&](std::uint64_t n, std::uint32_t k, double distance) {
        ProtocolParams p;
        p.input_bits = n;
        p.code_rate = fixed.code_rate;
        p.code_distance = fixed.code_distance;
        p.channel_count = k;
        p.visibility = fixed.visibility;
        p.dark_count_prob = fixed.dark_count_prob;
        p.error_tolerance = fixed.error_tolerance;
        p.channel = ChannelModel{distance, fixed.loss_db_per_km, fixed.detector_efficiency};
        return p;
    };

    // phase 1: single-channel optimum per (n, distance); it anchors the
    // q_single_channel column of every row with the same n and distance
    std::vector<OptimizationResult> single(n_count * d_count);
    run_indexed(single.size(), threads, [&](std::size_t idx) {
        std::size_t i = idx / d_count;
        std::size_t j = idx % d_count;
        single[idx] = minimize_photon_number(
            params_for(grid.input_sizes[i], 1, grid.distances_km[j]), fixed.optimizer);
    });

    // phase 2: the full grid, n-major, then channel count, then distance
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepRow> rows(n_count * k_count * d_count);
    run_indexed(rows.size(), threads, [&](std::size_t idx) {
        std::size_t i = idx / (k_count * d_count);
        std::size_t rem = idx % (k_count * d_count);
        std::size_t a = rem / d_count;
        std::size_t j = rem % d_count;
        std::uint64_t n = grid.input_sizes[i];
        std::uint32_t k = grid.channel_counts[a];
        double distance = grid.distances_km[j];
        const OptimizationResult& base = single[i * d_count + j];
        OptimizationResult r =
            k == 1 ? base : minimize_photon_number(params_for(n, k, distance), fixed.optimizer);

        SweepRow row;
        row.input_bits = n;
        row.channel_count = k;
        row.distance_km = distance;
        row.feasible = r.feasible;
        row.classical_best_known = classical_best_known(n);
        row.classical_limit = classical_limit(n, fixed.error_tolerance, limit_curve);
        if (r.feasible) {
            row.mu_star = r.mu_star;
            row.c1_threshold = r.decision.c1_threshold;
            row.p_error = r.decision.p_error;
            row.q_bits = r.q_bits;
            row.q_bits_both = r.q_bits_both;
        } else {
            row.mu_star = nan;
            row.c1_threshold = 0;
            row.p_error = nan;
            row.q_bits = nan;
            row.q_bits_both = nan;
        }
        row.q_single_channel = base.feasible ? base.q_bits : nan;
        // the published benefit ratios divide into the BOTH-party cost; the
        // channel-count ratio is basis-independent since the factor 2 cancels
        GammaRatios ratios =
            gamma_ratios(row.q_bits_both, n, base.feasible ? base.q_bits_both : nan);
        row.gamma_c = ratios.vs_classical;
        row.gamma_q = ratios.vs_single_channel;
        rows[idx] = row;
    });
    return rows;
}

std::vector<std::uint64_t> log_spaced_grid(std::uint64_t lo, std::uint64_t hi,
                                           std::size_t points) {
    if (lo < 1) throw std::invalid_argument("log_spaced_grid: lo must be at least 1");
    if (lo > hi) throw std::invalid_argument("log_spaced_grid: lo must not exceed hi");
    if (points < 1) throw std::invalid_argument("log_spaced_grid: points must be at least 1");
    if (lo < hi && points < 2)
        throw std::invalid_argument("log_spaced_grid: a range needs at least 2 points");
    std::vector<std::uint64_t> grid;
    grid.reserve(points);
    if (lo == hi || points == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double log_lo = std::log10(static_cast<double>(lo));
    const double log_hi = std::log10(static_cast<double>(hi));
    for (std::size_t i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(points - 1);
        double x = std::pow(10.0, log_lo + f * (log_hi - log_lo));
        std::uint64_t v = static_cast<std::uint64_t>(std::llround(x));
        v = std::clamp<std::uint64_t>(v, lo, hi);
        if (grid.empty() || grid.back() != v) grid.push_back(v);
    }
    return grid;
}

} // namespace wdmcqf
