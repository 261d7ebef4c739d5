#include "wdmcqf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <vector>

namespace wdmcqf {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kMaxSimulatedPulses = 100'000'000;
constexpr std::uint64_t kMaxMaskBits = 100'000'000;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

SplitRng::SplitRng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
    // the all-zero state is the one fixed point of the generator
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

std::uint64_t SplitRng::trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return master_seed + (trial_index + 1) * kGolden;
}

SplitRng SplitRng::for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    return SplitRng(trial_seed(master_seed, trial_index));
}

std::uint64_t SplitRng::next() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SplitRng::next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t SplitRng::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitRng::next_below: zero bound");
    // multiply-shift reduction; the modulo bias is below 2^-64 per unit of
    // bound and irrelevant at the bounds used here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
}

CodewordDiffMask build_codeword_pair(std::uint64_t input_bits, double code_rate,
                                     double code_distance, Scenario scenario,
                                     std::uint64_t seed) {
    CodeGeometry geo = derive_code_geometry(input_bits, code_rate, 1, code_distance);
    CodewordDiffMask mask;
    mask.codeword_bits = geo.codeword_bits;
    if (scenario == Scenario::equal_inputs) return mask;
    if (geo.codeword_bits > kMaxMaskBits)
        throw std::domain_error("build_codeword_pair: codeword too large to materialize");
    std::uint64_t m = geo.codeword_bits;
    std::uint64_t d = geo.min_distance_bits;
    if (d == 0 || d > m)
        throw std::invalid_argument(
            "build_codeword_pair: minimum distance must lie in [1, codeword_bits]");
    // Floyd's sampling: d distinct positions, uniform over the possible sets
    SplitRng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(d) * 2);
    for (std::uint64_t j = m - d; j < m; ++j) {
        std::uint64_t r = rng.next_below(j + 1);
        chosen.insert(chosen.count(r) != 0 ? j : r);
    }
    mask.diff_positions.assign(chosen.begin(), chosen.end());
    std::sort(mask.diff_positions.begin(), mask.diff_positions.end());
    return mask;
}

PulseClickProbs pulse_click_probability(std::uint32_t diff_channels,
                                        std::uint32_t channels_in_pulse,
                                        const ProtocolParams& params,
                                        const CodeGeometry& geometry) {
    if (channels_in_pulse == 0 || channels_in_pulse > params.channel_count)
        throw std::invalid_argument(
            "pulse_click_probability: channels_in_pulse outside [1, channel_count]");
    if (diff_channels > channels_in_pulse)
        throw std::invalid_argument(
            "pulse_click_probability: more differing channels than channels");
    if (geometry.codeword_bits == 0)
        throw std::invalid_argument("pulse_click_probability: empty geometry");
    double eta = transmittance(params.channel);
    // per-channel mean photon number reaching the beam splitter
    double y = 2.0 * params.mean_photon_number * eta /
               static_cast<double>(geometry.codeword_bits);
    double excited = -std::expm1(-y);
    double on_diff = excited * params.visibility;         // differing bits light D1
    double on_same = excited * (1.0 - params.visibility); // matching bits leak into D1
    double d = static_cast<double>(diff_channels);
    double rest = static_cast<double>(channels_in_pulse) - d;
    double survive = 1.0 - params.dark_count_prob;
    PulseClickProbs out;
    out.d1 = 1.0 - survive * std::pow(1.0 - on_diff, d) * std::pow(1.0 - on_same, rest);
    out.d0 = 1.0 - survive * std::pow(1.0 - on_same, d) * std::pow(1.0 - on_diff, rest);
    return out;
}

namespace {

// Count of successes among n independent trials at rate p, via geometric
// gaps between successes; identical in distribution to summing n Bernoulli
// draws but needs O(n*p + 1) variates.
std::uint64_t binomial_draw(SplitRng& rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    std::uint64_t count = 0;
    while (true) {
        double gap = std::floor(std::log(rng.next_unit()) / log_q) + 1.0;
        if (gap > static_cast<double>(n - pos)) break;
        pos += static_cast<std::uint64_t>(gap);
        ++count;
        if (pos >= n) break;
    }
    return count;
}

struct PulseGroups {
    std::vector<std::uint64_t> full_pulse_hist; // index d: full pulses with d diffs
    std::uint64_t last_pulse_diffs = 0;
    std::uint32_t last_pulse_channels = 0;
};

PulseGroups group_pulses(const ProtocolParams& params, const CodeGeometry& geometry,
                         const CodewordDiffMask& mask) {
    std::uint32_t k = params.channel_count;
    std::uint64_t pulses = geometry.pulse_count;
    std::uint64_t m = geometry.codeword_bits;
    PulseGroups g;
    g.full_pulse_hist.assign(static_cast<std::size_t>(k) + 1, 0);
    g.last_pulse_channels = static_cast<std::uint32_t>(m - (pulses - 1) * k);
    std::uint64_t full_with_diffs = 0;
    const auto& pos = mask.diff_positions;
    for (std::size_t i = 0; i < pos.size();) {
        if (pos[i] >= m || (i > 0 && pos[i] <= pos[i - 1]))
            throw std::invalid_argument(
                "simulate_trial: mask positions must be sorted, distinct, in range");
        std::uint64_t pulse = pos[i] / k;
        std::size_t j = i;
        while (j < pos.size() && pos[j] / k == pulse) ++j;
        std::uint64_t count = j - i;
        if (pulse == pulses - 1) {
            g.last_pulse_diffs = count;
        } else {
            g.full_pulse_hist[static_cast<std::size_t>(count)] += 1;
            ++full_with_diffs;
        }
        i = j;
    }
    g.full_pulse_hist[0] = (pulses - 1) - full_with_diffs;
    return g;
}

// Pulse groups with their click probabilities evaluated once; a trial is
// then one binomial draw per group, in a fixed order.
struct TrialPlan {
    struct Slot {
        std::uint64_t count = 0;
        PulseClickProbs probs;
    };
    std::vector<Slot> slots; // ascending diff count over full pulses, then the tail pulse
};

TrialPlan build_trial_plan(const ProtocolParams& params, const CodeGeometry& geometry,
                           const CodewordDiffMask& mask) {
    if (geometry.pulse_count == 0 || geometry.codeword_bits == 0)
        throw std::invalid_argument("simulate_trial: empty geometry");
    if (geometry.pulse_count > kMaxSimulatedPulses)
        throw std::domain_error("simulate_trial: pulse count exceeds the simulation guard");
    if (mask.codeword_bits != geometry.codeword_bits)
        throw std::invalid_argument("simulate_trial: mask does not match the geometry");
    PulseGroups groups = group_pulses(params, geometry, mask);
    std::uint32_t k = params.channel_count;
    TrialPlan plan;
    for (std::uint32_t d = 0; d <= k; ++d) {
        std::uint64_t n = groups.full_pulse_hist[d];
        if (n == 0) continue;
        plan.slots.push_back({n, pulse_click_probability(d, k, params, geometry)});
    }
    plan.slots.push_back(
        {1, pulse_click_probability(static_cast<std::uint32_t>(groups.last_pulse_diffs),
                                    groups.last_pulse_channels, params, geometry)});
    return plan;
}

TrialRecord run_planned_trial(const TrialPlan& plan, std::uint64_t threshold,
                              std::uint64_t seed) {
    SplitRng rng(seed);
    TrialRecord rec;
    rec.seed = seed;
    // fixed draw order: difference detector over every slot, then agreement
    for (const auto& slot : plan.slots) rec.c1 += binomial_draw(rng, slot.count, slot.probs.d1);
    for (const auto& slot : plan.slots) rec.c0 += binomial_draw(rng, slot.count, slot.probs.d0);
    rec.verdict = decide(rec.c1, threshold);
    return rec;
}

} // namespace

TrialRecord simulate_trial(const ProtocolParams& params, const CodeGeometry& geometry,
                           const CodewordDiffMask& mask, std::uint64_t threshold,
                           std::uint64_t seed) {
    params.validate();
    return run_planned_trial(build_trial_plan(params, geometry, mask), threshold, seed);
}

ExperimentSummary run_experiment(const ProtocolParams& params, const CodeGeometry& geometry,
                                 Scenario scenario, std::uint64_t trials,
                                 std::uint64_t master_seed, unsigned threads,
                                 std::optional<std::uint64_t> threshold_override) {
    params.validate();
    if (trials == 0) throw std::invalid_argument("run_experiment: trials must be positive");
    CodeGeometry expected = derive_code_geometry(params);
    if (expected.codeword_bits != geometry.codeword_bits ||
        expected.pulse_count != geometry.pulse_count)
        throw std::invalid_argument("run_experiment: geometry does not match the parameters");

    CodewordDiffMask mask = build_codeword_pair(params.input_bits, params.code_rate,
                                                params.code_distance, scenario, master_seed);
    double p_equal = click_prob_equal(params, geometry);
    double p_diff = click_prob_diff(params, geometry);
    std::uint64_t threshold =
        threshold_override ? *threshold_override
                           : optimal_threshold(geometry.pulse_count, p_equal, p_diff)
                                 .c1_threshold;
    DecisionOutcome at_threshold =
        error_at_threshold(geometry.pulse_count, p_equal, p_diff, threshold);

    ExperimentSummary sum;
    sum.trials = trials;
    sum.scenario = scenario;
    sum.threshold = threshold;
    sum.master_seed = master_seed;
    sum.analytic_click_prob = scenario == Scenario::equal_inputs ? p_equal : p_diff;
    sum.analytic_error = scenario == Scenario::equal_inputs ? at_threshold.p_err_equal
                                                            : at_threshold.p_err_diff;

    Verdict expected_verdict =
        scenario == Scenario::equal_inputs ? Verdict::equal : Verdict::different;
    TrialPlan plan = build_trial_plan(params, geometry, mask);
    unsigned workers = std::max(1u, threads);
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, trials));
    struct Bucket {
        std::uint64_t c0 = 0;
        std::uint64_t c1 = 0;
        std::uint64_t wrong = 0;
    };
    std::vector<Bucket> buckets(workers);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned w) {
        std::uint64_t begin = trials * w / workers;
        std::uint64_t end = trials * (w + 1) / workers;
        Bucket local;
        try {
            for (std::uint64_t i = begin; i < end; ++i) {
                TrialRecord rec =
                    run_planned_trial(plan, threshold, SplitRng::trial_seed(master_seed, i));
                local.c0 += rec.c0;
                local.c1 += rec.c1;
                if (rec.verdict != expected_verdict) ++local.wrong;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
        buckets[w] = local;
    };
    if (workers == 1) {
        work(0);
    } else {
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Bucket total;
    for (const auto& b : buckets) {
        total.c0 += b.c0;
        total.c1 += b.c1;
        total.wrong += b.wrong;
    }
    double n = static_cast<double>(trials);
    double mean_c1 = static_cast<double>(total.c1) / n;
    if (scenario == Scenario::equal_inputs)
        sum.mean_c1_equal = mean_c1;
    else
        sum.mean_c1_diff = mean_c1;
    sum.mean_c0 = static_cast<double>(total.c0) / n;
    double rate = static_cast<double>(total.wrong) / n;
    sum.empirical_error_rate = rate;
    sum.ci_halfwidth = 1.96 * std::sqrt(rate * (1.0 - rate) / n);
    return sum;
}

} // namespace wdmcqf
