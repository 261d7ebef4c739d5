#include "doctest.h"

#include <wdmcqf/montecarlo.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

using namespace wdmcqf;

namespace {

ProtocolParams mc_fixture() {
    ProtocolParams p;
    p.input_bits = 24'000; // m = 100'000, M = 100'000 / k
    p.code_rate = 0.24;
    p.code_distance = 0.22;
    p.channel_count = 5;
    p.mean_photon_number = 40.0;
    p.visibility = 0.97;
    p.dark_count_prob = 1e-6;
    p.error_tolerance = 1e-5;
    p.channel = {0.0, 0.2, 1.0};
    return p;
}

} // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("rng streams are deterministic and split cleanly") {
    SplitRng a(12345), b(12345), c(54321);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t va = a.next();
        all_equal = all_equal && (va == b.next());
        any_diff = any_diff || (va != c.next());
    }
    CHECK(all_equal);
    CHECK(any_diff);

    CHECK(SplitRng::trial_seed(7, 0) != SplitRng::trial_seed(7, 1));
    CHECK(SplitRng::trial_seed(7, 0) != SplitRng::trial_seed(8, 0));

    SplitRng d = SplitRng::for_trial(99, 3);
    SplitRng e(SplitRng::trial_seed(99, 3));
    CHECK(d.next() == e.next());

    SplitRng zero(0); // the degenerate seed must still produce a live stream
    bool nonzero = false;
    for (int i = 0; i < 8; ++i) nonzero = nonzero || (zero.next() != 0);
    CHECK(nonzero);

    SplitRng u(2026);
    for (int i = 0; i < 10'000; ++i) {
        double v = u.next_unit();
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
    }
    SplitRng w(2027);
    for (int i = 0; i < 10'000; ++i) REQUIRE(w.next_below(17) < 17);
    CHECK_THROWS_AS(w.next_below(0), std::invalid_argument);
}

TEST_CASE("codeword pair construction honors the distance contract") {
    CodewordDiffMask equal = build_codeword_pair(24'000, 0.24, 0.22,
                                                 Scenario::equal_inputs, 11);
    CHECK(equal.codeword_bits == 100'000);
    CHECK(equal.diff_positions.empty());

    CodewordDiffMask diff = build_codeword_pair(24'000, 0.24, 0.22,
                                                Scenario::worst_case_different, 11);
    CHECK(diff.codeword_bits == 100'000);
    CHECK(diff.diff_positions.size() == 22'000); // ceil(0.22 * 100000)
    CHECK(std::is_sorted(diff.diff_positions.begin(), diff.diff_positions.end()));
    std::set<std::uint64_t> unique(diff.diff_positions.begin(), diff.diff_positions.end());
    CHECK(unique.size() == diff.diff_positions.size());
    CHECK(diff.diff_positions.back() < 100'000);

    CodewordDiffMask again = build_codeword_pair(24'000, 0.24, 0.22,
                                                 Scenario::worst_case_different, 11);
    CHECK(again.diff_positions == diff.diff_positions);
    CodewordDiffMask other = build_codeword_pair(24'000, 0.24, 0.22,
                                                 Scenario::worst_case_different, 12);
    CHECK(other.diff_positions != diff.diff_positions);

    // mask materialization guard: the codeword no longer fits the simulator
    CHECK_THROWS_AS(build_codeword_pair(30'000'000, 0.24, 0.22,
                                        Scenario::worst_case_different, 1),
                    std::domain_error);
}

TEST_CASE("per-pulse click probabilities follow the independent-channel model") {
    ProtocolParams p = mc_fixture();
    CodeGeometry g = derive_code_geometry(p);
    double eta = transmittance(p.channel);
    double y = 2.0 * p.mean_photon_number * eta / static_cast<double>(g.codeword_bits);
    double excited = -std::expm1(-y);
    auto model = [&](std::uint32_t d, std::uint32_t k) {
        return 1.0 - (1.0 - p.dark_count_prob) *
                         std::pow(1.0 - excited * p.visibility, d) *
                         std::pow(1.0 - excited * (1.0 - p.visibility), k - d);
    };
    for (std::uint32_t d = 0; d <= 5; ++d) {
        PulseClickProbs probs = pulse_click_probability(d, 5, p, g);
        CHECK(probs.d1 == doctest::Approx(model(d, 5)).epsilon(1e-13));
        CHECK(probs.d1 >= 0.0);
        CHECK(probs.d1 <= 1.0);
        CHECK(probs.d0 >= 0.0);
    }
    // the two detectors swap roles when every channel differs vs none
    PulseClickProbs all_diff = pulse_click_probability(5, 5, p, g);
    PulseClickProbs none_diff = pulse_click_probability(0, 5, p, g);
    CHECK(all_diff.d1 == doctest::Approx(none_diff.d0).epsilon(1e-13));
    CHECK(all_diff.d0 == doctest::Approx(none_diff.d1).epsilon(1e-13));
    // more differing channels light the difference detector more
    CHECK(all_diff.d1 > none_diff.d1);

    CHECK_THROWS_AS(pulse_click_probability(6, 5, p, g), std::invalid_argument);
    CHECK_THROWS_AS(pulse_click_probability(0, 6, p, g), std::invalid_argument);

    // single-channel pulse agrees with the composite worst-case formula at
    // full difference up to the dark-count cross term
    ProtocolParams one = mc_fixture();
    one.channel_count = 1;
    one.code_distance = 0.4999999;
    CodeGeometry og = derive_code_geometry(one);
    PulseClickProbs probs = pulse_click_probability(1, 1, one, og);
    double closed_form_d1 = 0.97 * (-std::expm1(-2.0 * one.mean_photon_number *
                                            transmittance(one.channel) /
                                            static_cast<double>(og.codeword_bits))) +
                        1e-6;
    CHECK(std::fabs(probs.d1 - closed_form_d1) / closed_form_d1 < 3e-6);
}

TEST_CASE("trials are reproducible and respect the verdict rule") {
    ProtocolParams p = mc_fixture();
    CodeGeometry g = derive_code_geometry(p);
    CodewordDiffMask mask = build_codeword_pair(p.input_bits, p.code_rate, p.code_distance,
                                                Scenario::worst_case_different, 31);
    TrialRecord r1 = simulate_trial(p, g, mask, 10, 777);
    TrialRecord r2 = simulate_trial(p, g, mask, 10, 777);
    CHECK(r1.c0 == r2.c0);
    CHECK(r1.c1 == r2.c1);
    CHECK(r1.seed == 777);
    CHECK(r1.verdict == decide(r1.c1, 10));

    TrialRecord r3 = simulate_trial(p, g, mask, 10, 778);
    bool same = r3.c0 == r1.c0 && r3.c1 == r1.c1;
    CHECK(!same);

    CodewordDiffMask wrong = mask;
    wrong.codeword_bits += 1;
    CHECK_THROWS_AS(simulate_trial(p, g, wrong, 10, 1), std::invalid_argument);
    CodewordDiffMask shuffled = mask;
    std::swap(shuffled.diff_positions.front(), shuffled.diff_positions.back());
    CHECK_THROWS_AS(simulate_trial(p, g, shuffled, 10, 1), std::invalid_argument);
}

TEST_CASE("perfect visibility and no dark counts make equal inputs silent") {
    ProtocolParams p = mc_fixture();
    p.visibility = 1.0;
    p.dark_count_prob = 0.0;
    CodeGeometry g = derive_code_geometry(p);
    ExperimentSummary s = run_experiment(p, g, Scenario::equal_inputs, 200, 5);
    CHECK(s.empirical_error_rate == 0.0);
    REQUIRE(s.mean_c1_equal.has_value());
    CHECK(*s.mean_c1_equal == 0.0);
    CHECK(s.mean_c0 > 0.0); // the agreement detector still fires
}

TEST_CASE("experiment summary aggregates trials faithfully") {
    ProtocolParams p = mc_fixture();
    CodeGeometry g = derive_code_geometry(p);

    ExperimentSummary one = run_experiment(p, g, Scenario::worst_case_different, 1, 42,
                                           1, 10);
    CodewordDiffMask mask = build_codeword_pair(p.input_bits, p.code_rate, p.code_distance,
                                                Scenario::worst_case_different, 42);
    TrialRecord direct = simulate_trial(p, g, mask, 10, SplitRng::trial_seed(42, 0));
    REQUIRE(one.mean_c1_diff.has_value());
    CHECK(*one.mean_c1_diff == static_cast<double>(direct.c1));
    CHECK(one.mean_c0 == static_cast<double>(direct.c0));
    CHECK(one.threshold == 10);
    CHECK(one.trials == 1);
    CHECK(one.master_seed == 42);

    ExperimentSummary serial = run_experiment(p, g, Scenario::worst_case_different,
                                              500, 42, 1);
    ExperimentSummary parallel = run_experiment(p, g, Scenario::worst_case_different,
                                                500, 42, 8);
    REQUIRE(serial.mean_c1_diff.has_value());
    REQUIRE(parallel.mean_c1_diff.has_value());
    CHECK(*serial.mean_c1_diff == *parallel.mean_c1_diff);
    CHECK(serial.mean_c0 == parallel.mean_c0);
    CHECK(serial.empirical_error_rate == parallel.empirical_error_rate);
    CHECK(serial.threshold == parallel.threshold);

    // the auto threshold comes from the analytic optimum
    DecisionOutcome expected = optimal_threshold(g.pulse_count, click_prob_equal(p, g),
                                                 click_prob_diff(p, g));
    CHECK(serial.threshold == expected.c1_threshold);
    CHECK(serial.analytic_error == doctest::Approx(expected.p_err_diff));
    CHECK(serial.analytic_click_prob == doctest::Approx(click_prob_diff(p, g)));

    CHECK_THROWS_AS(run_experiment(p, g, Scenario::equal_inputs, 0, 1),
                    std::invalid_argument);
    CodeGeometry other = derive_code_geometry(p.input_bits, p.code_rate, 3, p.code_distance);
    CHECK_THROWS_AS(run_experiment(p, other, Scenario::equal_inputs, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("difference-detector counts track the analytic mean") {
    ProtocolParams p = mc_fixture();
    CodeGeometry g = derive_code_geometry(p);
    double pd = click_prob_diff(p, g);
    double M = static_cast<double>(g.pulse_count);
    std::uint64_t trials = 2000;
    ExperimentSummary s = run_experiment(p, g, Scenario::worst_case_different,
                                         trials, 20260818, 4);
    REQUIRE(s.mean_c1_diff.has_value());
    double expected = M * pd;
    double sigma = std::sqrt(M * pd * (1.0 - pd) / static_cast<double>(trials));
    CHECK(std::fabs(*s.mean_c1_diff - expected) < 4.0 * sigma);
}

TEST_CASE("the pulse-count guard rejects oversized simulations") {
    ProtocolParams p = mc_fixture();
    p.input_bits = 48'000'000; // m = 2e8 > the 1e8 guard
    p.channel_count = 1;
    CodeGeometry g = derive_code_geometry(p);
    CodewordDiffMask empty;
    empty.codeword_bits = g.codeword_bits;
    CHECK_THROWS_AS(simulate_trial(p, g, empty, 10, 1), std::domain_error);
    CHECK_THROWS_AS(run_experiment(p, g, Scenario::equal_inputs, 1, 1), std::domain_error);
}

} // TEST_SUITE
