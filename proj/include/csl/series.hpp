#ifndef CSL_SERIES_HPP
#define CSL_SERIES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "csl/config.hpp"
#include "csl/errors.hpp"
#include "csl/special_functions.hpp"

namespace csl {

enum class SeriesMode { plain_zeta, eta_prefactored, regularized };

inline std::string_view to_string(SeriesMode mode)
{
    switch (mode) {
    case SeriesMode::plain_zeta: return "plain_zeta";
    case SeriesMode::eta_prefactored: return "eta_prefactored";
    case SeriesMode::regularized: return "regularized";
    }
    return "unknown";
}

/// A truncated-series value with a heuristic (not rigorous) error estimate.
struct SeriesValue {
    Complex value;
    std::uint64_t n_used = 0;
    SeriesMode mode = SeriesMode::eta_prefactored;
    double est_error = 0.0;
};

namespace detail {

inline void require_terms(std::uint64_t n)
{
    if (n < 1) {
        throw DomainError("series truncation n must be >= 1");
    }
}

inline void check_regularization_pole(Complex z, double guard_radius)
{
    if (std::abs(z - 1.0) <= guard_radius) {
        throw SingularityError("regularized partial sum is singular at z = 1 (z = "
                               + to_string(z) + ")");
    }
}

inline double alternating_sign(std::uint64_t k) { return (k % 2 == 1) ? 1.0 : -1.0; }

} // namespace detail

/// zeta_n(z) = sum_{k=1}^{n} k^{-z}, ascending k.
inline Complex zeta_partial(Complex z, std::uint64_t n)
{
    detail::require_terms(n);
    Complex sum{0.0, 0.0};
    for (std::uint64_t k = 1; k <= n; ++k) {
        sum += complex_power(k, z);
    }
    return sum;
}

/// xi_n(z) = sum_{k=1}^{n} (-1)^{k-1} k^{-z}, ascending k.
inline Complex eta_partial(Complex z, std::uint64_t n)
{
    detail::require_terms(n);
    Complex sum{0.0, 0.0};
    for (std::uint64_t k = 1; k <= n; ++k) {
        sum += detail::alternating_sign(k) * complex_power(k, z);
    }
    return sum;
}

/// n^{1-z} / (1-z), the leading tail of zeta_n that the regularization removes.
inline Complex regularization_term(Complex z, std::uint64_t n)
{
    return complex_power(n, z - 1.0) / (1.0 - z);
}

/// zeta_hat_n(z) = zeta_n(z) - n^{1-z}/(1-z).
inline Complex zeta_hat_regularized(Complex z, std::uint64_t n,
                                    double guard_radius = default_guard_radius)
{
    detail::require_terms(n);
    detail::check_regularization_pole(z, guard_radius);
    return zeta_partial(z, n) - regularization_term(z, n);
}

/// Incrementally extends zeta_n(z) so a whole ladder of n can be visited in one
/// pass. Values agree bit-for-bit with zeta_partial / zeta_hat_regularized.
class RegularizedSequence {
public:
    explicit RegularizedSequence(Complex z, double guard_radius = default_guard_radius)
        : z_(z)
    {
        detail::check_regularization_pole(z, guard_radius);
    }

    void advance_to(std::uint64_t n)
    {
        if (n < n_) {
            throw DomainError("RegularizedSequence cannot move backwards");
        }
        while (n_ < n) {
            ++n_;
            partial_ += complex_power(n_, z_);
        }
    }

    void step() { advance_to(n_ + 1); }

    std::uint64_t n() const noexcept { return n_; }
    Complex point() const noexcept { return z_; }
    Complex partial_sum() const noexcept { return partial_; }

    Complex value() const
    {
        detail::require_terms(n_);
        return partial_ - regularization_term(z_, n_);
    }

private:
    Complex z_;
    std::uint64_t n_ = 0;
    Complex partial_{0.0, 0.0};
};

/// 1 - 2^{1-z}; the eta-to-zeta prefactor is its reciprocal.
inline Complex eta_prefactor(Complex z)
{
    return 1.0 - std::exp((1.0 - z) * std::numbers::ln2);
}

namespace detail {

struct AveragedSum {
    Complex value;
    Complex derivative;
    double correction = 0.0;  // |last averaging step| for value
    std::uint64_t n_used = 0;
};

// Sums the eta series (and optionally its z-derivative) up to n terms, then, when
// requested, extends to n + order partial sums and averages consecutive pairs
// `order` times.
inline AveragedSum eta_sum(Complex z, const EvalConfig& config, bool with_derivative)
{
    const std::uint64_t n = config.n_terms;
    const std::uint32_t order = config.accelerate ? config.accel_order : 0;

    std::vector<Complex> sums;
    std::vector<Complex> dsums;
    sums.reserve(order + 1);
    if (with_derivative) {
        dsums.reserve(order + 1);
    }

    Complex s{0.0, 0.0};
    Complex ds{0.0, 0.0};
    for (std::uint64_t k = 1; k <= n + order; ++k) {
        const Complex term = alternating_sign(k) * complex_power(k, z);
        s += term;
        if (with_derivative) {
            ds -= std::log(static_cast<double>(k)) * term;
        }
        if (k >= n) {
            sums.push_back(s);
            if (with_derivative) {
                dsums.push_back(ds);
            }
        }
    }

    AveragedSum out;
    out.n_used = n + order;
    if (order == 0) {
        out.value = sums.front();
        out.derivative = with_derivative ? dsums.front() : Complex{};
        // first omitted term
        out.correction = std::pow(static_cast<double>(n + 1), -z.real());
        return out;
    }

    for (std::uint32_t round = 0; round < order; ++round) {
        const std::size_t width = sums.size() - 1 - round;
        if (round + 1 == order) {
            out.correction = 0.5 * std::abs(sums[1] - sums[0]);
        }
        for (std::size_t i = 0; i < width; ++i) {
            sums[i] = 0.5 * (sums[i] + sums[i + 1]);
            if (with_derivative) {
                dsums[i] = 0.5 * (dsums[i] + dsums[i + 1]);
            }
        }
    }
    out.value = sums.front();
    out.derivative = with_derivative ? dsums.front() : Complex{};
    return out;
}

inline Complex checked_prefactor(Complex z, const EvalConfig& config)
{
    config.validate();
    if (!(z.real() > 0.0)) {
        throw DomainError("eta representation requires Re z > 0 (z = " + to_string(z) + ")");
    }
    const Complex p = eta_prefactor(z);
    if (std::abs(p) <= config.guard_radius) {
        throw PrefactorSingularityError("1 - 2^(1-z) vanishes at z = " + to_string(z));
    }
    return p;
}

} // namespace detail

/// zeta_hat(z) = xi(z) / (1 - 2^{1-z}), the eta series optionally tail-averaged.
inline SeriesValue zeta_hat_eta(Complex z, const EvalConfig& config)
{
    const Complex p = detail::checked_prefactor(z, config);
    const auto sum = detail::eta_sum(z, config, false);
    return SeriesValue{sum.value / p, sum.n_used, SeriesMode::eta_prefactored,
                       sum.correction / std::abs(p)};
}

/// zeta_hat and d/dz zeta_hat from the same (term-wise differentiated) eta pass.
inline std::pair<SeriesValue, Complex> zeta_hat_eta_with_derivative(Complex z,
                                                                    const EvalConfig& config)
{
    const Complex p = detail::checked_prefactor(z, config);
    const auto sum = detail::eta_sum(z, config, true);
    const Complex value = sum.value / p;
    // p' = 2^{1-z} ln 2 = (1 - p) ln 2
    const Complex dp = (1.0 - p) * std::numbers::ln2;
    const Complex derivative = (sum.derivative - value * dp) / p;
    return {SeriesValue{value, sum.n_used, SeriesMode::eta_prefactored,
                        sum.correction / std::abs(p)},
            derivative};
}

/// |xi_{2n} - (zeta_{2n} - 2^{1-z} zeta_n)|; pure rounding noise.
inline double identity_residual_plain(Complex z, std::uint64_t n)
{
    detail::require_terms(n);
    const Complex two_pow = std::exp((1.0 - z) * std::numbers::ln2);
    const Complex lhs = eta_partial(z, 2 * n);
    const Complex rhs = zeta_partial(z, 2 * n) - two_pow * zeta_partial(z, n);
    return std::abs(lhs - rhs);
}

/// |xi_{2n} - (zeta_hat_{2n} - 2^{1-z} zeta_hat_n)|; holds exactly since
/// (2n)^{1-z} = 2^{1-z} n^{1-z}.
inline double identity_residual_regularized(Complex z, std::uint64_t n,
                                            double guard_radius = default_guard_radius)
{
    detail::require_terms(n);
    detail::check_regularization_pole(z, guard_radius);
    const Complex two_pow = std::exp((1.0 - z) * std::numbers::ln2);
    const Complex lhs = eta_partial(z, 2 * n);
    const Complex rhs = zeta_hat_regularized(z, 2 * n, guard_radius)
                        - two_pow * zeta_hat_regularized(z, n, guard_radius);
    return std::abs(lhs - rhs);
}

} // namespace csl

#endif // CSL_SERIES_HPP
