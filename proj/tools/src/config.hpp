#pragma once

#include <wdmcqf/baselines.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wdmcqf::cli {

// Defaults below reproduce the toolkit's reference parameter set (visibility
// 0.97, dark-count probability 1e-6 per window, 0.2 dB/km fiber loss, 20%
// detector efficiency, error tolerance 1e-5). They intentionally differ from
// the core library's permissive constructor defaults; the command line is an
// experiment front end, the library is a calculator.
struct ProtocolConfig {
    std::optional<std::uint64_t> input_bits; // n; required by optimize/simulate
    double code_rate = 0.24;                 // c
    double code_distance = 0.22;             // delta
    std::uint32_t channels = 1;              // k
    std::optional<double> mu;                // fixed per-party mean photon number
    double visibility = 0.97;
    double dark_count = 1e-6;
    double epsilon = 1e-5;
};

struct ChannelConfig {
    double distance_km = 0.0;
    double loss_db_per_km = 0.2;
    double detector_efficiency = 0.2;
};

struct SweepConfig {
    bool present = false;
    std::vector<std::uint64_t> n_values; // explicit, or expanded from min/max/points
    std::vector<std::uint32_t> k_values{1};
    std::vector<double> distances_km{0.0};
};

struct MonteCarloConfig {
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string scenario = "both";          // equal | different | both
    std::optional<std::uint64_t> threshold; // empty: optimal for the parameters
    std::uint64_t guard_max_pulses = 100'000'000;
    std::string trials_out; // per-trial CSV path; empty disables
};

struct FiberConfig {
    double smf_a_km = 20.0;
    double smf_b_km = 20.0;
    double dcf_km = 6.9;
    double d_smf_ps_nm_km = 17.0;
    double d_dcf_ps_nm_km = -99.0;
    double spacing_nm = 2.4;
    std::uint32_t channels = 6;
    double rep_rate_hz = 50.0e6; // configured in MHz, stored in Hz
    double mod_window_ps = 800.0;
    double group_delay_us_per_km = 5.0;
    double recombination_tolerance_ps = 50.0;
};

struct Table1Config {
    std::string fixture_csv; // empty: use the embedded reference rows
};

struct RunConfig {
    ProtocolConfig protocol;
    ChannelConfig channel;
    SweepConfig sweep;
    ClassicalCurve classical;
    MonteCarloConfig montecarlo;
    FiberConfig fiber;
    Table1Config table1;
    std::string source; // path, echoed in diagnostics
};

// The classical lower-bound curve used when the config does not supply one.
ClassicalCurve default_limit_curve();

// Strict full-string parsers shared by the config loader and the table
// fixture reader. Return false instead of accepting trailing garbage.
bool parse_unsigned_text(const std::string& text, std::uint64_t& out);
bool parse_number_text(const std::string& text, double& out);
std::string trim_text(const std::string& text);
std::vector<std::string> split_csv_line(const std::string& line);

// Loads an INI-style or JSON config. The JSON route is taken when the file
// name ends in ".json" or the first non-space byte is '{'. Unknown sections
// or keys, duplicate INI keys, and malformed values raise
// std::invalid_argument; messages carry "<file>:<line>:" anchors for INI and
// "<file>: /section/key:" pointers for JSON.
RunConfig load_config(const std::string& path);

} // namespace wdmcqf::cli
