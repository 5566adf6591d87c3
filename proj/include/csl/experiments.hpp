#ifndef CSL_EXPERIMENTS_HPP
#define CSL_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "csl/config.hpp"
#include "csl/errors.hpp"
#include "csl/functional_equation.hpp"
#include "csl/series.hpp"

namespace csl {

/// Upper bound on n_base * 2^m for the doubling experiments.
inline constexpr std::uint64_t default_doubling_budget = std::uint64_t{1} << 24;

/// Minimum averaging depth for the reference value of the error-scaling scan.
inline constexpr std::uint32_t scaling_reference_order = 40;

/// Doubling-ratio measurements at one point. All lists have m_doublings entries,
/// entry i describing n = n_base * 2^i -> 2n.
struct RatioReport {
    Complex point;
    std::uint64_t n_base = 0;
    std::uint32_t m_doublings = 0;
    std::vector<Complex> ratios;           ///< H_{2n} / H_n
    std::vector<Complex> zeta_hat_ratios;  ///< zeta_hat_{2n} / zeta_hat_n at the point
    std::vector<double> moduli;            ///< |H_{2n} / H_n|
    std::vector<Complex> step_exponents;   ///< phase-tracked log2(H_{2n} / H_n)
    Complex fitted_exponent;               ///< mean of step_exponents over the tail
    Complex reference_exponent;            ///< 1 - 2 * point
    bool phase_tracked = true;             ///< every unit step moved arg H by < pi/2
};

/// Convergence-rate measurement of the regularized partial sums.
struct ScalingReport {
    Complex point;
    std::vector<std::uint64_t> n_grid;
    std::vector<double> errors;            ///< |zeta_hat_n - reference|
    std::vector<bool> domain_ok;           ///< |Im z| <= 2 pi n / C
    double fitted_slope = 0.0;
    double reference_slope = 0.0;          ///< -Re z
    Complex reference;
    double reference_est_error = 0.0;
    double hl_constant = 0.0;
};

/// Size of the doubling tail used for exponent fits: ceil(m / 2).
inline std::size_t doubling_tail_length(std::uint32_t m) { return (m + 1) / 2; }

namespace detail {

inline std::uint64_t doubling_end(std::uint64_t n_base, std::uint32_t m, std::uint64_t budget)
{
    if (n_base < 1) {
        throw DomainError("n_base must be >= 1");
    }
    if (m < 1) {
        throw DomainError("number of doublings m must be >= 1");
    }
    if (m >= 63 || n_base > (budget >> m)) {
        throw BudgetExceeded("n_base * 2^m exceeds the budget of " + std::to_string(budget) + " terms");
    }
    return n_base << m;
}

inline Complex checked_ratio(Complex numerator, Complex denominator, std::uint64_t n)
{
    if (std::abs(denominator) < ratio_underflow_threshold) {
        throw DivisionByNearZero("denominator underflows at n = " + std::to_string(n));
    }
    return numerator / denominator;
}

/// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace detail

/// zeta_hat_{2n}(point) / zeta_hat_n(point) for n = n_base, 2 n_base, ...,
/// 2^{m-1} n_base, from plain regularized sums.
inline std::vector<Complex> zeta_hat_doubling(Complex point, std::uint64_t n_base, std::uint32_t m,
                                              double guard_radius = default_guard_radius,
                                              std::uint64_t budget = default_doubling_budget)
{
    detail::doubling_end(n_base, m, budget);
    RegularizedSequence seq(point, guard_radius);
    std::vector<Complex> out;
    out.reserve(m);
    seq.advance_to(n_base);
    Complex previous = seq.value();
    for (std::uint32_t i = 0; i < m; ++i) {
        const std::uint64_t n = n_base << i;
        seq.advance_to(2 * n);
        const Complex current = seq.value();
        out.push_back(detail::checked_ratio(current, previous, n));
        previous = current;
    }
    return out;
}

/// Doubling ratios of H_n = zeta_hat_n(z) / zeta_hat_n(1 - z).
///
/// The base-2 exponent of a single ratio is only defined modulo 2 pi i / ln 2, so
/// log H is carried continuously along every integer n of the schedule and each
/// step exponent is (log H_{2n} - log H_n) / ln 2 on that continuous branch.
inline RatioReport h_doubling(Complex point, std::uint64_t n_base, std::uint32_t m,
                              double guard_radius = default_guard_radius,
                              std::uint64_t budget = default_doubling_budget)
{
    const std::uint64_t n_end = detail::doubling_end(n_base, m, budget);
    if (std::abs(point) <= guard_radius) {
        throw SingularityError("H_n needs zeta_hat_n(1 - z), singular at z = 0");
    }
    RegularizedSequence upper(point, guard_radius);
    RegularizedSequence lower(1.0 - point, guard_radius);

    RatioReport report;
    report.point = point;
    report.n_base = n_base;
    report.m_doublings = m;
    report.reference_exponent = 1.0 - 2.0 * point;

    upper.advance_to(n_base);
    lower.advance_to(n_base);
    Complex zeta_prev = upper.value();
    Complex h_prev = detail::checked_ratio(zeta_prev, lower.value(), n_base);
    Complex log_h = std::log(h_prev);

    std::uint64_t next_mark = 2 * n_base;
    Complex h_mark = h_prev;
    Complex zeta_mark = zeta_prev;
    Complex log_mark = log_h;
    for (std::uint64_t n = n_base + 1; n <= n_end; ++n) {
        upper.step();
        lower.step();
        const Complex zeta_n = upper.value();
        const Complex h_n = detail::checked_ratio(zeta_n, lower.value(), n);
        const Complex increment = std::log(h_n / h_prev);
        if (std::abs(increment.imag()) > 0.5 * std::numbers::pi) {
            report.phase_tracked = false;
        }
        log_h += increment;
        h_prev = h_n;

        if (n == next_mark) {
            const Complex ratio = h_n / h_mark;
            report.ratios.push_back(ratio);
            report.moduli.push_back(std::abs(ratio));
            report.zeta_hat_ratios.push_back(detail::checked_ratio(zeta_n, zeta_mark, n / 2));
            report.step_exponents.push_back((log_h - log_mark) / std::numbers::ln2);
            h_mark = h_n;
            zeta_mark = zeta_n;
            log_mark = log_h;
            next_mark *= 2;
        }
    }

    const std::size_t tail = doubling_tail_length(m);
    Complex sum{0.0, 0.0};
    for (std::size_t i = m - tail; i < m; ++i) {
        sum += report.step_exponents[i];
    }
    report.fitted_exponent = sum / static_cast<double>(tail);
    return report;
}

/// Mean of |log2 |H_{2n}/H_n|| over the schedule tail: a finite-n proxy for
/// |Re(1 - 2 point)|, near 0 when the ratio modulus is near 1.
inline double modulus_limit_check(const RatioReport& report)
{
    const std::size_t tail = doubling_tail_length(report.m_doublings);
    double sum = 0.0;
    for (std::size_t i = report.moduli.size() - tail; i < report.moduli.size(); ++i) {
        sum += std::abs(std::log2(report.moduli[i]));
    }
    return sum / static_cast<double>(tail);
}

inline double modulus_limit_check(Complex point, std::uint64_t n_base, std::uint32_t m,
                                  double guard_radius = default_guard_radius,
                                  std::uint64_t budget = default_doubling_budget)
{
    return modulus_limit_check(h_doubling(point, n_base, m, guard_radius, budget));
}

/// Powers-of-two grid 2^lo, ..., 2^hi.
inline std::vector<std::uint64_t> power_of_two_grid(unsigned lo, unsigned hi)
{
    std::vector<std::uint64_t> grid;
    for (unsigned e = lo; e <= hi; ++e) {
        grid.push_back(std::uint64_t{1} << e);
    }
    return grid;
}

/// Measures |zeta_hat_n(z) - zeta_hat(z)| over n_grid and fits the log-log slope
/// on the grid points inside the validity domain |Im z| <= 2 pi n / C.
inline ScalingReport error_scaling_scan(Complex point, std::span<const std::uint64_t> n_grid,
                                        const EvalConfig& config)
{
    config.validate();
    if (!(point.real() > 0.0 && point.real() < 1.0)) {
        throw DomainError("error scaling scan needs 0 < Re z < 1 (z = " + to_string(point) + ")");
    }
    if (n_grid.empty() || n_grid.front() < 1) {
        throw DomainError("n grid must be non-empty with n >= 1");
    }
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1]) {
            throw DomainError("n grid must be strictly increasing");
        }
    }

    ScalingReport report;
    report.point = point;
    report.n_grid.assign(n_grid.begin(), n_grid.end());
    report.reference_slope = -point.real();
    report.hl_constant = config.hl_constant;

    std::size_t usable = 0;
    for (std::uint64_t n : n_grid) {
        const bool ok = std::abs(point.imag()) <= 2.0 * std::numbers::pi * static_cast<double>(n)
                                                      / config.hl_constant;
        report.domain_ok.push_back(ok);
        usable += ok;
    }
    if (usable < 3) {
        const double bound = 2.0 * std::numbers::pi * static_cast<double>(n_grid.back()) / config.hl_constant;
        throw InsufficientDomain("need |Im z| <= 2*pi*n/C at >= 3 grid points; |Im z| = "
                                 + std::to_string(std::abs(point.imag())) + ", C = "
                                 + std::to_string(config.hl_constant) + ", largest n = "
                                 + std::to_string(n_grid.back()) + " gives bound " + std::to_string(bound)
                                 + " (" + std::to_string(usable) + " usable points)");
    }

    const auto ref = zeta_hat_eta(point, config.accelerated(scaling_reference_order));
    report.reference = ref.value;
    report.reference_est_error = ref.est_error;

    RegularizedSequence seq(point, config.guard_radius);
    std::vector<double> log_n, log_err;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        seq.advance_to(n_grid[i]);
        const double err = std::abs(seq.value() - ref.value);
        report.errors.push_back(err);
        if (report.domain_ok[i] && err > 0.0) {
            log_n.push_back(std::log(static_cast<double>(n_grid[i])));
            log_err.push_back(std::log(err));
        }
    }
    if (log_n.size() < 3) {
        throw InsufficientDomain("fewer than 3 usable grid points with nonzero error");
    }
    report.fitted_slope = detail::least_squares_slope(log_n, log_err);
    return report;
}

} // namespace csl

#endif // CSL_EXPERIMENTS_HPP
