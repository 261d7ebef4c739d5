#pragma once

#include <cstdint>

namespace wdmcqf::cli {

// One row of the published experimental reference table: input size, pulse
// count, both parties' optimized mean photon numbers, the published
// communication cost, and the published classical-advantage ratio with the
// uncertainty band quoted alongside it. All runs used six wavelength
// channels.
struct Table1Row {
    const char* label;
    std::uint64_t n;
    std::uint64_t pulses;
    double mu_a;
    double mu_b;
    double q_published;
    double gamma_c_published;
    double gamma_c_tolerance;
    std::uint32_t channels;
};

inline constexpr Table1Row kReferenceRows[] = {
    {"row1", 1'440'000, 1'000'000, 1282.0, 1479.0, 37321.0, 1.03, 0.03, 6},
    {"row2", 2'160'000, 1'500'000, 1425.0, 1644.0, 43792.0, 1.10, 0.01, 6},
    {"row3", 36'000'000, 25'000'000, 2724.0, 3143.0, 100176.0, 1.92, 0.05, 6},
    {"row4", 71'900'000, 50'000'000, 3150.0, 3635.0, 121232.0, 2.24, 0.07, 6},
    {"row5", 144'000'000, 100'000'000, 4050.0, 4673.0, 161422.0, 2.4, 0.1, 6},
    {"row6", 360'000'000, 250'000'000, 6051.0, 6982.0, 250871.0, 2.4, 0.2, 6},
    {"row7", 1'080'000'000, 750'000'000, 9722.0, 11218.0, 423574.0, 2.5, 0.1, 6},
};

inline constexpr std::size_t kReferenceRowCount =
    sizeof(kReferenceRows) / sizeof(kReferenceRows[0]);

} // namespace wdmcqf::cli
