#include "wdmcqf/binomial_tails.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wdmcqf {

namespace {

constexpr std::uint64_t kExactRegimeMax = 1'000'000;
constexpr double kPoissonMeanMax = 50.0;
constexpr std::uint64_t kTermCap = 300'000'000;
// Terms decrease monotonically away from the anchor, and the loop count is
// bounded by kTermCap, so the neglected remainder stays below
// kTermCutoff * kTermCap ~ 3e-18 of the running sum.
constexpr double kTermCutoff = 1e-26;

// ln(n!) in long double. lgamma in double carries a few ulp of error, which
// at lgamma(1e5+1) ~ 1e6 is ~1e-9 absolute; that error lands in the exponent
// of every pmf. The table keeps it near 1e-13 for the trial counts where
// callers rely on tight relative accuracy.
constexpr std::uint64_t kLogFactTableSize = 131'073;

const std::vector<long double>& log_factorial_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(kLogFactTableSize);
        t[0] = 0.0L;
        long double sum = 0.0L;
        long double comp = 0.0L;
        for (std::uint64_t i = 1; i < kLogFactTableSize; ++i) {
            long double term = std::log(static_cast<long double>(i)) - comp;
            long double next = sum + term;
            comp = (next - sum) - term;
            sum = next;
            t[i] = sum;
        }
        return t;
    }();
    return table;
}

// caller guarantees 0 < prob < 1 and count <= trials
double log_binomial_pmf(std::uint64_t trials, double prob, std::uint64_t count) {
    if (trials < kLogFactTableSize) {
        const auto& lf = log_factorial_table();
        long double lp = static_cast<long double>(prob);
        long double v = lf[trials] - lf[count] - lf[trials - count] +
                        static_cast<long double>(count) * std::log(lp) +
                        static_cast<long double>(trials - count) * std::log1p(-lp);
        return static_cast<double>(v);
    }
    double n = static_cast<double>(trials);
    double c = static_cast<double>(count);
    return std::lgamma(n + 1.0) - std::lgamma(c + 1.0) - std::lgamma(n - c + 1.0) +
           c * std::log(prob) + (n - c) * std::log1p(-prob);
}

double log_poisson_pmf(double lambda, std::uint64_t count) {
    double c = static_cast<double>(count);
    return -lambda + c * std::log(lambda) - std::lgamma(c + 1.0);
}

struct TailPair {
    double lower = 0.0;     // P(X < t)
    double inclusive = 0.0; // P(X >= t)
};

[[noreturn]] void refuse_term_count() {
    throw std::domain_error("binomial tail: exact summation would exceed the term cap");
}

// Sum of pmf terms relative to the anchor at j0, multiplied back via the
// anchor's log pmf. When upward, covers j0, j0+1, ...; otherwise j0 down to
// 0. The anchor must sit on the decaying side of the mode.
double anchored_binomial_sum(std::uint64_t trials, double prob, std::uint64_t j0,
                             bool upward) {
    double q = 1.0 - prob;
    double sum = 1.0;
    double term = 1.0;
    std::uint64_t steps = 0;
    if (upward) {
        for (std::uint64_t j = j0; j < trials; ++j) {
            term *= (static_cast<double>(trials - j) * prob) /
                    (static_cast<double>(j + 1) * q);
            sum += term;
            if (term <= sum * kTermCutoff) break;
            if (++steps > kTermCap) refuse_term_count();
        }
    } else {
        for (std::uint64_t j = j0; j > 0; --j) {
            term *= (static_cast<double>(j) * q) /
                    (static_cast<double>(trials - j + 1) * prob);
            sum += term;
            if (term <= sum * kTermCutoff) break;
            if (++steps > kTermCap) refuse_term_count();
        }
    }
    double value = std::exp(log_binomial_pmf(trials, prob, j0) + std::log(sum));
    return std::min(value, 1.0);
}

// 1 <= t <= trials, 0 < prob < 1
TailPair exact_pair(std::uint64_t trials, double prob, std::uint64_t t) {
    double mean = static_cast<double>(trials) * prob;
    double sigma = std::sqrt(mean * (1.0 - prob));
    if (static_cast<double>(t) > mean) {
        double side = static_cast<double>(trials - t) + 1.0;
        if (std::min(side, 80.0 * sigma + 128.0) > static_cast<double>(kTermCap))
            refuse_term_count();
        double u = anchored_binomial_sum(trials, prob, t, true);
        return {1.0 - u, u};
    }
    double side = static_cast<double>(t);
    if (std::min(side, 80.0 * sigma + 128.0) > static_cast<double>(kTermCap))
        refuse_term_count();
    double l = anchored_binomial_sum(trials, prob, t - 1, false);
    return {l, 1.0 - l};
}

// X ~ Poisson(lambda), t >= 1: {P(X < t), P(X >= t)}
TailPair poisson_raw_pair(double lambda, std::uint64_t t) {
    if (std::min(static_cast<double>(t), 80.0 * std::sqrt(lambda) + 128.0) >
        static_cast<double>(kTermCap))
        refuse_term_count();
    double sum = 1.0;
    double term = 1.0;
    std::uint64_t steps = 0;
    if (static_cast<double>(t) > lambda) {
        for (std::uint64_t j = t;; ++j) {
            term *= lambda / static_cast<double>(j + 1);
            sum += term;
            if (term <= sum * kTermCutoff) break;
            if (++steps > kTermCap) refuse_term_count();
        }
        double u = std::min(std::exp(log_poisson_pmf(lambda, t) + std::log(sum)), 1.0);
        return {1.0 - u, u};
    }
    for (std::uint64_t j = t - 1; j > 0; --j) {
        term *= static_cast<double>(j) / lambda;
        sum += term;
        if (term <= sum * kTermCutoff) break;
        if (++steps > kTermCap) refuse_term_count();
    }
    double l = std::min(std::exp(log_poisson_pmf(lambda, t - 1) + std::log(sum)), 1.0);
    return {l, 1.0 - l};
}

TailPair poisson_pair(std::uint64_t trials, double prob, std::uint64_t t) {
    if (prob <= 0.5) return poisson_raw_pair(static_cast<double>(trials) * prob, t);
    // reflect X -> trials - X so the approximating mean stays small; the
    // reflection swaps which side of the pair is which
    TailPair r =
        poisson_raw_pair(static_cast<double>(trials) * (1.0 - prob), trials - t + 1);
    return {r.inclusive, r.lower};
}

TailPair normal_pair(std::uint64_t trials, double prob, std::uint64_t t) {
    double mean = static_cast<double>(trials) * prob;
    double sigma = std::sqrt(mean * (1.0 - prob));
    // continuity correction: both sides split the lattice point at t - 0.5,
    // and erfc(z) + erfc(-z) = 2 keeps the pair complementary
    double z = (static_cast<double>(t) - 0.5 - mean) / (sigma * std::sqrt(2.0));
    return {0.5 * std::erfc(-z), 0.5 * std::erfc(z)};
}

TailRegime pick_regime(std::uint64_t trials, double prob) {
    if (trials <= kExactRegimeMax) return TailRegime::exact_sum;
    double reflected_mean = static_cast<double>(trials) * std::min(prob, 1.0 - prob);
    return reflected_mean <= kPoissonMeanMax ? TailRegime::poisson : TailRegime::normal;
}

struct CoreValue {
    TailPair pair;
    TailRegime regime = TailRegime::exact_sum;
    double error_bound = 0.0;
};

// t may be trials + 1 (empty upper side); degenerate cases are exact
CoreValue core(std::uint64_t trials, double prob, std::uint64_t t,
               std::optional<TailRegime> forced) {
    if (t == 0) return {{0.0, 1.0}, TailRegime::exact_sum, 0.0};
    if (t > trials) return {{1.0, 0.0}, TailRegime::exact_sum, 0.0};
    if (prob <= 0.0) return {{1.0, 0.0}, TailRegime::exact_sum, 0.0};
    if (prob >= 1.0) return {{0.0, 1.0}, TailRegime::exact_sum, 0.0};
    TailRegime regime = forced ? *forced : pick_regime(trials, prob);
    CoreValue out;
    out.regime = regime;
    switch (regime) {
    case TailRegime::exact_sum:
        out.pair = exact_pair(trials, prob, t);
        out.error_bound = 0.0;
        break;
    case TailRegime::poisson:
        out.pair = poisson_pair(trials, prob, t);
        out.error_bound = poisson_error_bound(trials, prob);
        break;
    case TailRegime::normal:
        out.pair = normal_pair(trials, prob, t);
        out.error_bound = normal_error_bound(trials, prob);
        break;
    }
    return out;
}

void validate_query(const TailQuery& q) {
    if (q.trials == 0) throw std::invalid_argument("TailQuery.trials: must be positive");
    if (q.trials > 9'000'000'000'000'000'000ull)
        throw std::invalid_argument("TailQuery.trials: too large");
    if (!std::isfinite(q.prob) || q.prob < 0.0 || q.prob > 1.0)
        throw std::invalid_argument("TailQuery.prob: must lie in [0, 1]");
    if (q.threshold > q.trials)
        throw std::invalid_argument("TailQuery.threshold: must not exceed trials");
}

TailValue make(const CoreValue& c, bool inclusive_side) {
    return {inclusive_side ? c.pair.inclusive : c.pair.lower, c.regime, c.error_bound};
}

} // namespace

TailValue upper_tail(const TailQuery& q) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold + 1, std::nullopt), true);
}

TailValue lower_tail(const TailQuery& q) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold, std::nullopt), false);
}

TailValue upper_tail_inclusive(const TailQuery& q) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold, std::nullopt), true);
}

TailValue upper_tail_with(const TailQuery& q, TailRegime regime) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold + 1, regime), true);
}

TailValue lower_tail_with(const TailQuery& q, TailRegime regime) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold, regime), false);
}

TailValue upper_tail_inclusive_with(const TailQuery& q, TailRegime regime) {
    validate_query(q);
    return make(core(q.trials, q.prob, q.threshold, regime), true);
}

double point_mass(std::uint64_t trials, double prob, std::uint64_t count) {
    if (trials == 0) throw std::invalid_argument("point_mass: trials must be positive");
    if (!std::isfinite(prob) || prob < 0.0 || prob > 1.0)
        throw std::invalid_argument("point_mass: prob must lie in [0, 1]");
    if (count > trials) return 0.0;
    if (prob <= 0.0) return count == 0 ? 1.0 : 0.0;
    if (prob >= 1.0) return count == trials ? 1.0 : 0.0;
    return std::exp(log_binomial_pmf(trials, prob, count));
}

double bernoulli_kl(double a, double b) {
    if (!std::isfinite(a) || a < 0.0 || a > 1.0)
        throw std::invalid_argument("bernoulli_kl: a must lie in [0, 1]");
    if (!std::isfinite(b) || !(b > 0.0) || !(b < 1.0))
        throw std::invalid_argument("bernoulli_kl: b must lie in (0, 1)");
    double t1 = a == 0.0 ? 0.0 : a * std::log(a / b);
    double t2 = a == 1.0 ? 0.0 : (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    return t1 + t2;
}

double poisson_error_bound(std::uint64_t trials, double prob) {
    if (trials == 0) throw std::invalid_argument("poisson_error_bound: trials must be positive");
    if (!std::isfinite(prob) || prob < 0.0 || prob > 1.0)
        throw std::invalid_argument("poisson_error_bound: prob must lie in [0, 1]");
    // total-variation bound for the Poisson approximation, applied to the
    // reflected orientation actually used
    double p = std::min(prob, 1.0 - prob);
    return static_cast<double>(trials) * p * p;
}

double normal_error_bound(std::uint64_t trials, double prob) {
    if (trials == 0) throw std::invalid_argument("normal_error_bound: trials must be positive");
    if (!std::isfinite(prob) || !(prob > 0.0) || !(prob < 1.0))
        throw std::invalid_argument("normal_error_bound: prob must lie in (0, 1)");
    double q = 1.0 - prob;
    // Berry-Esseen with the explicit 0.4748 constant; the third absolute
    // moment of a centered Bernoulli(p) is p*q*(p^2 + q^2)
    return 0.4748 * (q * q + prob * prob) /
           std::sqrt(static_cast<double>(trials) * prob * q);
}

} // namespace wdmcqf
