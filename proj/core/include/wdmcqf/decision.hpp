#pragma once

#include "wdmcqf/binomial_tails.hpp"

#include <cstdint>

namespace wdmcqf {

enum class Verdict { equal, different };

// The referee's rule: equal iff the D1 count is strictly below the threshold.
Verdict decide(std::uint64_t c1_observed, std::uint64_t threshold);

struct DecisionOutcome {
    std::uint64_t c1_threshold = 0;
    // Probability the verdict is wrong under each hypothesis. With the strict
    // rule above, an observed count equal to the threshold reads "different",
    // so the equal-side error is the inclusive upper tail P(C1 >= t).
    double p_err_equal = 0.0; // P(C1 >= t | inputs equal)
    double p_err_diff = 0.0;  // P(C1 <  t | worst-case different inputs)
    double p_error = 0.0;     // max of the two
    TailRegime equal_regime = TailRegime::exact_sum;
    TailRegime diff_regime = TailRegime::exact_sum;
};

// Both error tails at a fixed threshold. Requires p_equal <= p_diff (the
// rule's orientation) and threshold <= pulse_count.
DecisionOutcome error_at_threshold(std::uint64_t pulse_count, double p_equal,
                                   double p_diff, std::uint64_t threshold);

// The threshold in [0, pulse_count] minimizing p_error; the smallest such
// threshold on ties. Exhaustive ascending scan (with a provably safe early
// stop) for pulse_count <= 1e5; tail-crossing binary search above that.
DecisionOutcome optimal_threshold(std::uint64_t pulse_count, double p_equal,
                                  double p_diff);

} // namespace wdmcqf
