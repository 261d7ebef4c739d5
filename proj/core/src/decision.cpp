#include "wdmcqf/decision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wdmcqf {

Verdict decide(std::uint64_t c1_observed, std::uint64_t threshold) {
    return c1_observed < threshold ? Verdict::equal : Verdict::different;
}

namespace {

void validate_inputs(std::uint64_t pulse_count, double p_equal, double p_diff) {
    if (pulse_count == 0)
        throw std::invalid_argument("decision: pulse_count must be positive");
    if (!std::isfinite(p_equal) || p_equal < 0.0 || p_equal > 1.0)
        throw std::invalid_argument("decision: p_equal must lie in [0, 1]");
    if (!std::isfinite(p_diff) || p_diff < 0.0 || p_diff > 1.0)
        throw std::invalid_argument("decision: p_diff must lie in [0, 1]");
    if (p_equal > p_diff)
        throw std::invalid_argument("decision: p_equal must not exceed p_diff");
}

DecisionOutcome outcome_at(std::uint64_t pulse_count, double p_equal, double p_diff,
                           std::uint64_t threshold) {
    TailValue a = upper_tail_inclusive({pulse_count, p_equal, threshold});
    TailValue b = lower_tail({pulse_count, p_diff, threshold});
    DecisionOutcome out;
    out.c1_threshold = threshold;
    out.p_err_equal = a.probability;
    out.p_err_diff = b.probability;
    out.p_error = std::max(a.probability, b.probability);
    out.equal_regime = a.regime;
    out.diff_regime = b.regime;
    return out;
}

} // namespace

DecisionOutcome error_at_threshold(std::uint64_t pulse_count, double p_equal,
                                   double p_diff, std::uint64_t threshold) {
    validate_inputs(pulse_count, p_equal, p_diff);
    if (threshold > pulse_count)
        throw std::invalid_argument("decision: threshold must not exceed pulse_count");
    return outcome_at(pulse_count, p_equal, p_diff, threshold);
}

DecisionOutcome optimal_threshold(std::uint64_t pulse_count, double p_equal,
                                  double p_diff) {
    validate_inputs(pulse_count, p_equal, p_diff);
    // The equal-side tail a(t) = P(X >= t | p_equal) falls with t while the
    // diff-side tail b(t) = P(X < t | p_diff) rises, so max(a, b) is
    // V-shaped. Find the first t where b overtakes a by bisection (b(0) = 0
    // < 1 = a(0), so t = 0 is always a valid "false" sentinel), then pick
    // the best threshold in a window wide enough to absorb rounding wobble
    // at the crossing.
    auto crossed = [&](std::uint64_t t) {
        double a = upper_tail_inclusive({pulse_count, p_equal, t}).probability;
        double b = lower_tail({pulse_count, p_diff, t}).probability;
        return b >= a;
    };
    std::uint64_t tc = pulse_count;
    if (crossed(pulse_count)) {
        std::uint64_t lo = 0;
        std::uint64_t hi = pulse_count;
        while (hi - lo > 1) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            (crossed(mid) ? hi : lo) = mid;
        }
        tc = hi;
    }
    std::uint64_t w_lo = tc >= 5 ? tc - 5 : 0;
    std::uint64_t w_hi = std::min(pulse_count, tc + 5);
    DecisionOutcome best;
    bool have = false;
    for (std::uint64_t t = w_lo; t <= w_hi; ++t) {
        DecisionOutcome cand = outcome_at(pulse_count, p_equal, p_diff, t);
        if (!have || cand.p_error < best.p_error) {
            best = cand;
            have = true;
        }
    }
    return best;
}

} // namespace wdmcqf
