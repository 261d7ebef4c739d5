#include "wdmcqf/protocol.hpp"

#include "wdmcqf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wdmcqf {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& why) {
    throw std::invalid_argument("ProtocolParams." + field + ": " + why);
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return a / b + (a % b != 0);
}

// Snap to the nearest integer when within relative 1e-9 of it, so that
// products like 0.22*200 (= 44 + 4 ulp) round-trip cleanly.
long double snapped(double x, const char* who) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative input");
    if (!(x < 9.0e18)) throw std::invalid_argument(std::string(who) + ": input too large");
    long double v = static_cast<long double>(x);
    long double nearest = std::round(v);
    long double tol = 1e-9L * std::fmax(1.0L, std::fabs(v));
    if (std::fabs(v - nearest) <= tol) return nearest;
    return v;
}

} // namespace

void ProtocolParams::validate() const {
    if (input_bits == 0) reject("input_bits", "must be positive");
    if (!(code_rate > 0.0) || !(code_rate < 1.0))
        reject("code_rate", "must lie in (0, 1)");
    // delta >= 0.5 would let the differing fraction dominate the pulse; the
    // worst-case analysis assumes the minority of channels differ.
    if (!(code_distance > 0.0) || !(code_distance < 0.5))
        reject("code_distance", "must lie in (0, 0.5)");
    if (channel_count == 0) reject("channel_count", "must be positive");
    if (!(mean_photon_number >= 0.0) || !std::isfinite(mean_photon_number))
        reject("mean_photon_number", "must be finite and nonnegative");
    // visibility <= 0.5 would make differing inputs no more likely to click
    // than equal ones; the decision rule needs the strict ordering.
    if (!(visibility > 0.5) || !(visibility <= 1.0))
        reject("visibility", "must lie in (0.5, 1]");
    if (!(dark_count_prob >= 0.0) || !(dark_count_prob < 1.0))
        reject("dark_count_prob", "must lie in [0, 1)");
    if (!(error_tolerance > 0.0) || !(error_tolerance <= 1.0))
        reject("error_tolerance", "must lie in (0, 1]");
    if (!(channel.distance_km >= 0.0) || !std::isfinite(channel.distance_km))
        reject("channel.distance_km", "must be finite and nonnegative");
    if (!(channel.loss_db_per_km >= 0.0))
        reject("channel.loss_db_per_km", "must be nonnegative");
    if (!(channel.detector_efficiency > 0.0) || !(channel.detector_efficiency <= 1.0))
        reject("channel.detector_efficiency", "must lie in (0, 1]");
}

std::uint64_t ceil_snap(double x) {
    return static_cast<std::uint64_t>(std::ceil(snapped(x, "ceil_snap")));
}

std::uint64_t floor_snap(double x) {
    return static_cast<std::uint64_t>(std::floor(snapped(x, "floor_snap")));
}

CodeGeometry derive_code_geometry(std::uint64_t input_bits, double code_rate,
                                  std::uint32_t channel_count,
                                  std::optional<double> code_distance) {
    if (input_bits == 0) throw std::invalid_argument("derive_code_geometry: input_bits == 0");
    if (!(code_rate > 0.0) || !(code_rate < 1.0))
        throw std::invalid_argument("derive_code_geometry: code_rate outside (0, 1)");
    if (channel_count == 0)
        throw std::invalid_argument("derive_code_geometry: channel_count == 0");
    if (code_distance && (!(*code_distance > 0.0) || !(*code_distance < 0.5)))
        throw std::invalid_argument("derive_code_geometry: code_distance outside (0, 0.5)");

    CodeGeometry g;
    g.codeword_bits = ceil_snap(static_cast<double>(input_bits) / code_rate);
    g.pulse_count = ceil_div(g.codeword_bits, channel_count);
    g.min_distance_bits =
        code_distance ? ceil_snap(*code_distance * static_cast<double>(g.codeword_bits)) : 0;
    return g;
}

CodeGeometry derive_code_geometry(const ProtocolParams& params) {
    return derive_code_geometry(params.input_bits, params.code_rate, params.channel_count,
                                params.code_distance);
}

CodeGeometry geometry_from_pulses(std::uint64_t pulse_count, std::uint32_t channel_count) {
    if (pulse_count == 0)
        throw std::invalid_argument("pulse_count: must be positive");
    if (channel_count == 0)
        throw std::invalid_argument("channel_count: must be positive");
    if (pulse_count > std::numeric_limits<std::uint64_t>::max() / channel_count)
        throw std::invalid_argument("pulse_count: codeword size overflows");
    CodeGeometry g;
    g.codeword_bits = pulse_count * channel_count;
    g.pulse_count = pulse_count;
    g.min_distance_bits = 0;
    return g;
}

double transmittance(const ChannelModel& channel) {
    return channel.detector_efficiency *
           std::pow(10.0, -channel.loss_db_per_km * channel.distance_km / 10.0);
}

namespace {

// Shared structure of the two click probabilities: the bright fraction
// (weight w) plus the dark-count floor, clamped to a probability.
// x = 2*mu*eta/M is the mean photon number reaching the beam splitter per
// composite pulse.
double click_prob(const ProtocolParams& params, const CodeGeometry& geometry,
                  double bright_weight) {
    if (geometry.pulse_count == 0)
        throw std::invalid_argument("click probability: zero pulse_count");
    double eta = transmittance(params.channel);
    double x = 2.0 * params.mean_photon_number * eta /
               static_cast<double>(geometry.pulse_count);
    double p = bright_weight * (-std::expm1(-x)) + params.dark_count_prob;
    return std::min(1.0, std::max(0.0, p));
}

} // namespace

double click_prob_equal(const ProtocolParams& params, const CodeGeometry& geometry) {
    return click_prob(params, geometry, 1.0 - params.visibility);
}

double click_prob_diff(const ProtocolParams& params, const CodeGeometry& geometry) {
    double delta = params.code_distance;
    double nu = params.visibility;
    return click_prob(params, geometry, delta * nu + (1.0 - delta) * (1.0 - nu));
}

double click_prob_separation(const ProtocolParams& params, const CodeGeometry& geometry) {
    double delta = params.code_distance;
    double nu = params.visibility;
    return click_prob(params, geometry, delta * (2.0 * nu - 1.0)) - params.dark_count_prob;
}

double fingerprint_cost(double mu, std::uint64_t codeword_bits) {
    if (!(mu >= 0.0)) throw std::invalid_argument("fingerprint_cost: negative mu");
    if (codeword_bits == 0) throw std::invalid_argument("fingerprint_cost: zero modes");
    if (mu > static_cast<double>(codeword_bits))
        throw std::invalid_argument("fingerprint_cost: mu exceeds mode count");
    if (mu == 0.0) return 0.0; // lim_{mu->0} mu*log2(m/mu) = 0
    double m = static_cast<double>(codeword_bits);
    return mu * (std::log2(m / mu) + std::log2(std::exp(1.0)));
}

double communication_cost(double mu_a, double mu_b, std::uint64_t codeword_bits) {
    return fingerprint_cost(mu_a, codeword_bits) + fingerprint_cost(mu_b, codeword_bits);
}

GammaRatios gamma_ratios(double q_bits, std::uint64_t input_bits,
                         double q_single_channel_opt) {
    GammaRatios r;
    if (!(q_bits > 0.0)) {
        r.vs_classical = std::numeric_limits<double>::quiet_NaN();
        r.vs_single_channel = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.vs_classical = classical_best_known(input_bits) / q_bits;
    r.vs_single_channel = q_single_channel_opt / q_bits;
    return r;
}

double relative_deviation(double value, double reference) {
    if (!std::isfinite(value) || !std::isfinite(reference) || reference == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return (value - reference) / std::fabs(reference);
}

double absolute_deviation(double value, double reference) {
    if (!std::isfinite(value) || !std::isfinite(reference))
        return std::numeric_limits<double>::quiet_NaN();
    return value - reference;
}

} // namespace wdmcqf
