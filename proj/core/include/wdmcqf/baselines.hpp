#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wdmcqf {

enum class CurveKind { best_known, classical_limit };

// Classical comparison curves. The best-known protocol cost is fixed; the
// optimized classical lower bound is pluggable: formula_id selects the
// expression, coefficients parameterize it, provenance records where the
// numbers came from. Supported formula_ids:
//   "best_known"  - 32*sqrt(n), no coefficients
//   "sqrt_affine" - a*sqrt(n) + b, coefficients {a, b}, a > 0, b >= 0
struct ClassicalCurve {
    CurveKind kind = CurveKind::best_known;
    std::string formula_id = "best_known";
    std::vector<double> coefficients;
    std::string provenance;
};

// Cost of the best known classical fingerprinting protocol: 32*sqrt(n) bits.
double classical_best_known(std::uint64_t input_bits);

// Evaluates the configured classical lower-bound curve. error_tolerance is
// accepted for forward compatibility; the supported formulas do not use it.
// Throws std::invalid_argument on an unconfigured or malformed curve.
double classical_limit(std::uint64_t input_bits, double error_tolerance,
                       const ClassicalCurve& curve);

} // namespace wdmcqf
