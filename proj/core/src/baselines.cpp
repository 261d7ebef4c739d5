#include "wdmcqf/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace wdmcqf {

double classical_best_known(std::uint64_t input_bits) {
    if (input_bits == 0)
        throw std::invalid_argument("classical_best_known: input_bits == 0");
    return 32.0 * std::sqrt(static_cast<double>(input_bits));
}

double classical_limit(std::uint64_t input_bits, double /*error_tolerance*/,
                       const ClassicalCurve& curve) {
    if (input_bits == 0)
        throw std::invalid_argument("classical_limit: input_bits == 0");
    double root = std::sqrt(static_cast<double>(input_bits));
    if (curve.formula_id == "best_known") {
        if (!curve.coefficients.empty())
            throw std::invalid_argument(
                "classical_limit: formula 'best_known' takes no coefficients");
        return 32.0 * root;
    }
    if (curve.formula_id == "sqrt_affine") {
        if (curve.coefficients.size() != 2)
            throw std::invalid_argument(
                "classical_limit: formula 'sqrt_affine' needs coefficients {a, b}");
        double a = curve.coefficients[0];
        double b = curve.coefficients[1];
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("classical_limit: coefficient a must be positive");
        if (!(b >= 0.0) || !std::isfinite(b))
            throw std::invalid_argument("classical_limit: coefficient b must be nonnegative");
        return a * root + b;
    }
    throw std::invalid_argument("classical_limit: unknown formula_id '" + curve.formula_id +
                                "'");
}

} // namespace wdmcqf
