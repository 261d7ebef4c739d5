#pragma once

#include <cstdint>
#include <optional>

namespace wdmcqf {

// Optical channel between a party and the referee.
struct ChannelModel {
    double distance_km = 0.0;
    double loss_db_per_km = 0.2;
    double detector_efficiency = 1.0;
};

// Full parameter set for one protocol instance. Everything downstream
// (geometry, click statistics, optimization, simulation) derives from this.
struct ProtocolParams {
    std::uint64_t input_bits = 0;      // n, length of the parties' inputs
    double code_rate = 0.24;           // c, ECC rate; codeword has ceil(n/c) bits
    double code_distance = 0.22;       // delta, relative minimum distance of the ECC
    std::uint32_t channel_count = 1;   // k, wavelength channels per composite pulse
    double mean_photon_number = 0.0;   // mu, one party's whole-fingerprint mean
    double visibility = 1.0;           // nu, interferometric visibility
    double dark_count_prob = 0.0;      // per detector per detection window
    double error_tolerance = 1e-5;     // epsilon, max acceptable decision error
    ChannelModel channel;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Sizes derived from (n, c, k) and optionally delta. min_distance_bits is the
// worst case the protocol must distinguish: differing inputs guarantee at
// least this many differing codeword bits. Zero when delta was not supplied.
struct CodeGeometry {
    std::uint64_t codeword_bits = 0;     // m = ceil(n / c)
    std::uint64_t pulse_count = 0;       // M = ceil(m / k), composite pulses
    std::uint64_t min_distance_bits = 0; // ceil(delta * m)
};

CodeGeometry derive_code_geometry(std::uint64_t input_bits, double code_rate,
                                  std::uint32_t channel_count,
                                  std::optional<double> code_distance = std::nullopt);
CodeGeometry derive_code_geometry(const ProtocolParams& params);

// Geometry reconstructed from a reported pulse count instead of an input
// size: every composite pulse carries channel_count modes, so the codeword
// spans pulse_count * channel_count of them. min_distance_bits is left zero.
CodeGeometry geometry_from_pulses(std::uint64_t pulse_count, std::uint32_t channel_count);

// ceil(x) robust to binary64 representation error: values within 1e-9
// relative distance of an integer snap to it before the ceiling.
// Needed because e.g. 0.22*200 evaluates to 44.000000000000004.
std::uint64_t ceil_snap(double x);
// floor(x) with the same snapping rule.
std::uint64_t floor_snap(double x);

// End-to-end transmittance: detector efficiency times fiber loss.
double transmittance(const ChannelModel& channel);

// Per-composite-pulse click probability at detector D1 when every channel in
// the pulse carries matching bits (equal-inputs case).
double click_prob_equal(const ProtocolParams& params, const CodeGeometry& geometry);

// Same, for a worst-case different codeword pair: a fraction delta of the
// channels interfere constructively at D1.
double click_prob_diff(const ProtocolParams& params, const CodeGeometry& geometry);

// Closed-form click_prob_diff - click_prob_equal (dark counts cancel).
// Useful for cross-checking the two expressions against each other.
double click_prob_separation(const ProtocolParams& params, const CodeGeometry& geometry);

// Information content of one coherent fingerprint with mean photon number mu
// spread over m modes: mu*(log2(m/mu) + log2 e), with the mu = 0 limit 0.
// Rejects mu > m (denser than one photon per mode breaks the weak-pulse model).
double fingerprint_cost(double mu, std::uint64_t codeword_bits);

// Both parties' fingerprints combined.
double communication_cost(double mu_a, double mu_b, std::uint64_t codeword_bits);

struct CommunicationCost {
    double q_bits = 0.0;
    double gamma_c = 0.0; // best-known-classical cost / q_bits
    double gamma_q = 0.0; // single-channel-optimum cost / q_bits
};

struct GammaRatios {
    double vs_classical = 0.0;
    double vs_single_channel = 0.0;
};

// gamma_c = 32*sqrt(n) / q_bits; gamma_q = q_single_channel_opt / q_bits.
GammaRatios gamma_ratios(double q_bits, std::uint64_t input_bits,
                         double q_single_channel_opt);

// (value - reference) / |reference|; NaN when reference is 0 or either
// argument is not finite. Signed: positive means value overshoots.
double relative_deviation(double value, double reference);

// value - reference, NaN when either argument is not finite.
double absolute_deviation(double value, double reference);

} // namespace wdmcqf
