#include "doctest.h"

#include <wdmcqf/optimizer.hpp>

#include <cmath>
#include <cstring>
#include <stdexcept>

using namespace wdmcqf;

namespace {

ProtocolParams small_fixture() {
    ProtocolParams p;
    p.input_bits = 240; // m = 1000, so M = 1000 at k = 1
    p.code_rate = 0.24;
    p.code_distance = 0.22;
    p.channel_count = 1;
    p.visibility = 1.0;
    p.dark_count_prob = 0.0;
    p.error_tolerance = 1e-5;
    p.channel = {0.0, 0.2, 0.2};
    return p;
}

} // namespace

TEST_SUITE("optimizer") {

TEST_CASE("closed-form minimum at perfect visibility and zero dark counts") {
    // With nu = 1 and p_dark = 0 the equal scenario never clicks, the optimal
    // threshold is 1, and feasibility reduces to (1 - delta*(1-e^-x))^M <= eps
    // with x = 2*mu*eta/M. That inverts in closed form.
    ProtocolParams p = small_fixture();
    double M = 1000.0, delta = 0.22, eta = 0.2, eps = 1e-5;
    double shortfall = (1.0 - std::pow(eps, 1.0 / M)) / delta;
    double x_min = -std::log1p(-shortfall);
    double mu_min = x_min * M / (2.0 * eta);
    REQUIRE(mu_min > 1.0);

    OptimizationResult r = minimize_photon_number(p);
    CHECK(r.feasible);
    CHECK(r.decision.c1_threshold == 1);
    CHECK(r.mu_star >= mu_min * (1.0 - 1e-12));
    CHECK(r.mu_star <= mu_min * 1.00504); // bisection width 0.005 relative
    CHECK(r.decision.p_error <= 1e-5);
    CHECK(r.p_equal == 0.0);
    CHECK(r.q_bits == doctest::Approx(fingerprint_cost(r.mu_star, 1000)));
    CHECK(r.q_bits_both == doctest::Approx(2.0 * r.q_bits));
}

TEST_CASE("tolerance one is satisfied by darkness") {
    ProtocolParams p = small_fixture();
    p.error_tolerance = 1.0;
    OptimizationResult r = minimize_photon_number(p);
    CHECK(r.feasible);
    CHECK(r.mu_star == 0.0);
    CHECK(r.q_bits == 0.0);
}

TEST_CASE("a hopeless channel reports infeasibility at the cap") {
    ProtocolParams p = small_fixture();
    p.channel.distance_km = 1000.0; // eta ~ 2e-21: no admissible mu exists
    OptimizationResult r = minimize_photon_number(p);
    CHECK(!r.feasible);
    CHECK(r.mu_cap == doctest::Approx(1000.0)); // m*k bound binds
    CHECK(r.mu_star == doctest::Approx(r.mu_cap));
    CHECK(r.decision.p_error > 1e-5);
}

TEST_CASE("feasibility is upward closed along a mu ladder") {
    ProtocolParams p = small_fixture();
    p.visibility = 0.97;
    p.dark_count_prob = 1e-6;
    CodeGeometry g = derive_code_geometry(p);
    OptimizationResult best = minimize_photon_number(p);
    REQUIRE(best.feasible);
    // beyond the feasibility point the error never climbs back above the
    // tolerance; the integer-threshold plateau gets a small absolute slack
    for (double mu = best.mu_star; mu <= best.mu_cap; mu *= 1.02) {
        p.mean_photon_number = mu;
        DecisionOutcome d = optimal_threshold(g.pulse_count, click_prob_equal(p, g),
                                              click_prob_diff(p, g));
        CHECK(d.p_error <= p.error_tolerance + 1e-7);
    }
    // across the whole range the optimal error is near-monotone: threshold
    // steps cause bounded proportional flicker, never sustained growth
    double previous = 2.0;
    for (double mu = 20.0; mu <= 1000.0; mu *= 1.05) {
        p.mean_photon_number = mu;
        DecisionOutcome d = optimal_threshold(g.pulse_count, click_prob_equal(p, g),
                                              click_prob_diff(p, g));
        CHECK(d.p_error <= previous * 1.6 + 1e-7);
        previous = d.p_error;
    }
}

TEST_CASE("more channels never cost more at large n") {
    ProtocolParams p = small_fixture();
    p.input_bits = 1'000'000'000;
    p.visibility = 0.97;
    p.dark_count_prob = 1e-6;
    OptimizationResult one = minimize_photon_number(p);
    p.channel_count = 6;
    OptimizationResult six = minimize_photon_number(p);
    REQUIRE(one.feasible);
    REQUIRE(six.feasible);
    CHECK(six.q_bits < one.q_bits);
}

TEST_CASE("cost grows with channel distance") {
    ProtocolParams p = small_fixture();
    p.input_bits = 100'000'000;
    p.visibility = 0.97;
    p.dark_count_prob = 1e-6;
    p.channel_count = 6;
    double previous = 0.0;
    for (double distance : {0.0, 20.0, 40.0}) {
        p.channel.distance_km = distance;
        OptimizationResult r = minimize_photon_number(p);
        REQUIRE(r.feasible);
        CHECK(r.q_bits >= previous);
        previous = r.q_bits;
    }
}

TEST_CASE("optimal photon number is nearly channel-count independent without dark counts") {
    // Splitting the same modes over fewer, brighter pulses leaves the total
    // click statistics nearly unchanged when dark counts don't scale with
    // the pulse count; only integer-threshold granularity moves mu*.
    ProtocolParams p = small_fixture();
    p.input_bits = 100'000'000;
    p.visibility = 0.97;
    p.dark_count_prob = 0.0;
    OptimizationResult one = minimize_photon_number(p);
    p.channel_count = 100;
    OptimizationResult hundred = minimize_photon_number(p);
    REQUIRE(one.feasible);
    REQUIRE(hundred.feasible);
    CHECK(std::fabs(one.mu_star - hundred.mu_star) / one.mu_star < 0.03);
}

TEST_CASE("settings are validated") {
    ProtocolParams p = small_fixture();
    OptimizerSettings s;
    s.grid_start = 0.0;
    CHECK_THROWS_AS(minimize_photon_number(p, s), std::invalid_argument);
    s = {};
    s.grid_ratio = 1.0;
    CHECK_THROWS_AS(minimize_photon_number(p, s), std::invalid_argument);
    s = {};
    s.rel_resolution = 1.0;
    CHECK_THROWS_AS(minimize_photon_number(p, s), std::invalid_argument);
    s = {};
    s.max_pulse_intensity = 0.0;
    CHECK_THROWS_AS(minimize_photon_number(p, s), std::invalid_argument);
}

TEST_CASE("sweep emits rows in grid order with consistent columns") {
    SweepGrid grid;
    grid.input_sizes = {100'000, 1'000'000};
    grid.channel_counts = {1, 2};
    grid.distances_km = {0.0, 20.0};
    SweepFixed fixed;
    ClassicalCurve curve;
    curve.kind = CurveKind::classical_limit;
    curve.formula_id = "sqrt_affine";
    curve.coefficients = {2.0, 0.0};

    std::vector<SweepRow> rows = sweep(grid, fixed, curve, 2);
    REQUIRE(rows.size() == 8);
    std::size_t i = 0;
    for (std::uint64_t n : grid.input_sizes)
        for (std::uint32_t k : grid.channel_counts)
            for (double d : grid.distances_km) {
                CHECK(rows[i].input_bits == n);
                CHECK(rows[i].channel_count == k);
                CHECK(rows[i].distance_km == d);
                ++i;
            }
    for (const SweepRow& row : rows) {
        REQUIRE(row.feasible);
        CHECK(row.classical_best_known ==
              doctest::Approx(classical_best_known(row.input_bits)));
        CHECK(row.classical_limit ==
              doctest::Approx(2.0 * std::sqrt(static_cast<double>(row.input_bits))));
        CHECK(row.gamma_c == doctest::Approx(row.classical_best_known / row.q_bits_both));
        CHECK(row.gamma_q == doctest::Approx(row.q_single_channel / row.q_bits));
        CHECK(row.q_bits_both == doctest::Approx(2.0 * row.q_bits));
        CHECK(row.p_error <= fixed.error_tolerance);
    }
    // the k=1 column is its own single-channel reference
    CHECK(rows[0].q_single_channel == doctest::Approx(rows[0].q_bits));
    // same (n, distance), k=2 rows reference the k=1 cost
    CHECK(rows[2].q_single_channel == doctest::Approx(rows[0].q_bits));
    CHECK(rows[3].q_single_channel == doctest::Approx(rows[1].q_bits));
}

TEST_CASE("sweep is deterministic across thread counts") {
    SweepGrid grid;
    grid.input_sizes = {100'000, 10'000'000};
    grid.channel_counts = {1, 6};
    grid.distances_km = {0.0, 20.0};
    SweepFixed fixed;
    ClassicalCurve curve; // best_known default
    std::vector<SweepRow> serial = sweep(grid, fixed, curve, 1);
    std::vector<SweepRow> parallel = sweep(grid, fixed, curve, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].mu_star == parallel[i].mu_star);
        CHECK(serial[i].q_bits == parallel[i].q_bits);
        CHECK(serial[i].p_error == parallel[i].p_error);
        CHECK(serial[i].c1_threshold == parallel[i].c1_threshold);
    }
}

TEST_CASE("infeasible grid points are recorded, not fatal") {
    SweepGrid grid;
    grid.input_sizes = {100'000};
    grid.channel_counts = {1};
    grid.distances_km = {0.0, 500.0};
    SweepFixed fixed;
    ClassicalCurve curve;
    std::vector<SweepRow> rows = sweep(grid, fixed, curve, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].feasible);
    CHECK(!rows[1].feasible);
    CHECK(std::isnan(rows[1].q_bits));
    CHECK(std::isnan(rows[1].gamma_c));
    CHECK(rows[1].c1_threshold == 0);
    // the classical columns do not depend on feasibility
    CHECK(rows[1].classical_best_known == doctest::Approx(classical_best_known(100'000)));

    SweepGrid empty;
    CHECK_THROWS_AS(sweep(empty, fixed, curve, 1), std::invalid_argument);
}

TEST_CASE("log-spaced grids land on round decades and stay sorted") {
    std::vector<std::uint64_t> grid = log_spaced_grid(100'000, 1'000'000'000'000'000'000ULL, 14);
    REQUIRE(grid.size() == 14);
    CHECK(grid.front() == 100'000);
    CHECK(grid.back() == 1'000'000'000'000'000'000ULL);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(grid[i] < grid[i + 1]);
    // 14 points over 13 decades puts every point on a round decade
    CHECK(grid[1] == 1'000'000);
    CHECK(grid[7] == 1'000'000'000'000ULL);

    CHECK(log_spaced_grid(7, 7, 5) == std::vector<std::uint64_t>{7});
    CHECK_THROWS_AS(log_spaced_grid(42, 900, 1), std::invalid_argument);
    // neighboring integers collapse after rounding instead of duplicating
    std::vector<std::uint64_t> tight = log_spaced_grid(10, 12, 9);
    CHECK(tight.size() == 3);
    CHECK(tight == std::vector<std::uint64_t>{10, 11, 12});

    CHECK_THROWS_AS(log_spaced_grid(0, 10, 3), std::invalid_argument);
    CHECK_THROWS_AS(log_spaced_grid(10, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(log_spaced_grid(10, 20, 0), std::invalid_argument);
}

} // TEST_SUITE
