#ifndef CSL_FUNCTIONAL_EQUATION_HPP
#define CSL_FUNCTIONAL_EQUATION_HPP

#include <cmath>
#include <numbers>

#include "csl/config.hpp"
#include "csl/errors.hpp"
#include "csl/series.hpp"
#include "csl/special_functions.hpp"

namespace csl {

/// Below this the denominator of H_n is treated as an exact zero.
inline constexpr double ratio_underflow_threshold = 1e-300;

/// H(z) = 2 Gamma(1-z) (2 pi)^{z-1} sin(pi z / 2), assembled in log space and
/// exponentiated once so Gamma(1-z) never overflows on its own.
inline Complex h_factor(Complex z, double guard_radius = default_guard_radius)
{
    const Complex one_minus_z = 1.0 - z;
    const double nearest = std::round(z.real());
    if (nearest >= 1.0 && std::abs(z - Complex{nearest, 0.0}) <= guard_radius) {
        throw PoleError("H(z) has a Gamma(1-z) pole at z = " + to_string(z));
    }
    constexpr double log_two_pi = 1.83787706640934548356;
    const Complex log_h = std::numbers::ln2 + log_gamma(one_minus_z, guard_radius)
                          - one_minus_z * log_two_pi
                          + log_sin(0.5 * std::numbers::pi * z);
    return std::exp(log_h);
}

/// H_n(z) = zeta_hat_n(z) / zeta_hat_n(1-z), both regularized partial sums.
inline Complex h_ratio_finite(Complex z, std::uint64_t n, double guard_radius = default_guard_radius)
{
    detail::require_terms(n);
    if (std::abs(z) <= guard_radius) {
        throw SingularityError("H_n needs zeta_hat_n(1 - z), singular at z = 0");
    }
    if (std::abs(z - 1.0) <= guard_radius) {
        throw SingularityError("H_n needs zeta_hat_n(z), singular at z = 1");
    }
    const Complex numerator = zeta_hat_regularized(z, n, guard_radius);
    const Complex denominator = zeta_hat_regularized(1.0 - z, n, guard_radius);
    if (std::abs(denominator) < ratio_underflow_threshold) {
        throw DivisionByNearZero("zeta_hat_n(1 - z) underflows at z = " + to_string(z));
    }
    return numerator / denominator;
}

struct ResidualReport {
    Complex point;
    Complex lhs;  ///< zeta_hat(z)
    Complex rhs;  ///< H(z) zeta_hat(1 - z)
    double residual = 0.0;
    EvalConfig config_used;
};

/// Compares zeta_hat(z) against H(z) zeta_hat(1-z), both sides from the eta
/// representation. Requires 0 < Re z < 1.
inline ResidualReport functional_equation_residual(Complex z, const EvalConfig& config)
{
    config.validate();
    if (!(z.real() > 0.0 && z.real() < 1.0)) {
        throw DomainError("functional-equation residual needs 0 < Re z < 1 (z = " + to_string(z) + ")");
    }
    ResidualReport report;
    report.point = z;
    report.config_used = config;
    report.lhs = zeta_hat_eta(z, config).value;
    report.rhs = h_factor(z, config.guard_radius) * zeta_hat_eta(1.0 - z, config).value;
    report.residual = std::abs(report.lhs - report.rhs);
    return report;
}

} // namespace csl

#endif // CSL_FUNCTIONAL_EQUATION_HPP
