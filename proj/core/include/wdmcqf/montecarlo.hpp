#pragma once

#include "wdmcqf/decision.hpp"
#include "wdmcqf/protocol.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wdmcqf {

// xoshiro256++ with splitmix64 seeding. for_trial derives a stream for one
// trial from the master seed so results do not depend on thread scheduling.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed);
    // The seed value for_trial feeds to the constructor; exposed so callers
    // can reproduce any one trial of an experiment in isolation.
    static std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);
    static SplitRng for_trial(std::uint64_t master_seed, std::uint64_t trial_index);

    std::uint64_t next();
    // Uniform in (0, 1], 53-bit resolution. Never returns 0, so log() is safe.
    double next_unit();
    // Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound);

  private:
    std::uint64_t s_[4];
};

enum class Scenario { equal_inputs, worst_case_different };

// Positions where the two codewords differ, sorted ascending. Empty for
// equal inputs. For the different-inputs case the mask has exactly the
// minimum distance of the code, the worst case for the test.
struct CodewordDiffMask {
    std::uint64_t codeword_bits = 0;
    std::vector<std::uint64_t> diff_positions;
};

CodewordDiffMask build_codeword_pair(std::uint64_t input_bits, double code_rate,
                                     double code_distance, Scenario scenario,
                                     std::uint64_t seed);

struct PulseClickProbs {
    double d1 = 0.0; // detector that fires on phase difference
    double d0 = 0.0; // detector that fires on phase agreement
};

// Click probabilities for one composite pulse carrying channels_in_pulse
// wavelength channels of which diff_channels carry differing bits.
PulseClickProbs pulse_click_probability(std::uint32_t diff_channels,
                                        std::uint32_t channels_in_pulse,
                                        const ProtocolParams& params,
                                        const CodeGeometry& geometry);

struct TrialRecord {
    std::uint64_t c0 = 0; // agreement-detector clicks
    std::uint64_t c1 = 0; // difference-detector clicks
    Verdict verdict = Verdict::equal;
    std::uint64_t seed = 0; // stream seed this trial used
};

// One full protocol run: both parties' codewords interfere pulse by pulse,
// detector clicks are counted, and the verdict compares c1 to the threshold.
// Refuses geometries with more than 1e8 pulses.
TrialRecord simulate_trial(const ProtocolParams& params, const CodeGeometry& geometry,
                           const CodewordDiffMask& mask, std::uint64_t threshold,
                           std::uint64_t seed);

struct ExperimentSummary {
    std::uint64_t trials = 0;
    Scenario scenario = Scenario::equal_inputs;
    std::uint64_t threshold = 0;
    std::optional<double> mean_c1_equal;
    std::optional<double> mean_c1_diff;
    double mean_c0 = 0.0;
    double empirical_error_rate = 0.0;
    double ci_halfwidth = 0.0; // 95% normal-approximation halfwidth
    double analytic_click_prob = 0.0; // per-pulse difference-detector rate
    double analytic_error = 0.0;      // tail probability at the threshold
    std::uint64_t master_seed = 0;
};

// Repeated trials with per-trial derived seeds. The threshold defaults to
// the optimal one for the analytic click probabilities; pass an override to
// pin it. Thread count only affects wall time, never the totals.
ExperimentSummary run_experiment(const ProtocolParams& params, const CodeGeometry& geometry,
                                 Scenario scenario, std::uint64_t trials,
                                 std::uint64_t master_seed, unsigned threads = 1,
                                 std::optional<std::uint64_t> threshold_override = {});

} // namespace wdmcqf
