#pragma once

#include <cstdint>

namespace wdmcqf {

enum class TailRegime { exact_sum, poisson, normal };

// A tail probability plus the method that produced it and that method's
// a-priori ABSOLUTE error bound: 0 for exact summation, the Le Cam
// total-variation bound M*p^2 for the Poisson regime, the Berry-Esseen bound
// 0.4748*((1-p)^2+p^2)/sqrt(M*p*(1-p)) for the normal regime.
struct TailValue {
    double probability = 0.0;
    TailRegime regime = TailRegime::exact_sum;
    double error_bound = 0.0;
};

struct TailQuery {
    std::uint64_t trials = 0;    // M
    double prob = 0.0;           // per-trial success probability
    std::uint64_t threshold = 0; // t, 0 <= t <= trials
};

// P(X > t) for X ~ Binomial(trials, prob). Strict inequality.
TailValue upper_tail(const TailQuery& q);
// P(X < t). Strict inequality.
TailValue lower_tail(const TailQuery& q);
// P(X >= t). Pairs exactly with lower_tail: for any t,
// lower_tail(t).probability + upper_tail_inclusive(t).probability == 1
// up to one rounding of the final subtraction (<= 1.2e-16 absolute).
TailValue upper_tail_inclusive(const TailQuery& q);

// Regime selection: exact summation for trials <= 1e6; for larger trial
// counts Poisson when the reflected mean min(Mp, M(1-p)) <= 50, else normal.
// The _with variants force a regime instead. Forced exact summation refuses
// queries whose converging sum would exceed ~3e8 terms (std::domain_error).
TailValue upper_tail_with(const TailQuery& q, TailRegime regime);
TailValue lower_tail_with(const TailQuery& q, TailRegime regime);
TailValue upper_tail_inclusive_with(const TailQuery& q, TailRegime regime);

// P(X == count), log-gamma evaluation, any size.
double point_mass(std::uint64_t trials, double prob, std::uint64_t count);

// KL divergence between Bernoulli(a) and Bernoulli(b) in nats; the exponent
// in the Chernoff bound P(X >= Ma) <= exp(-M*KL(a||b)) for a > b.
double bernoulli_kl(double a, double b);

// The documented a-priori absolute error bounds, exposed for cross-checks.
double poisson_error_bound(std::uint64_t trials, double prob);
double normal_error_bound(std::uint64_t trials, double prob);

} // namespace wdmcqf
