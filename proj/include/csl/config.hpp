#ifndef CSL_CONFIG_HPP
#define CSL_CONFIG_HPP

#include <cstdint>
#include <string>

#include "csl/errors.hpp"
#include "csl/special_functions.hpp"

namespace csl {

/// Evaluation settings shared by every series-based operation.
struct EvalConfig {
    std::uint64_t n_terms = 10'000;    ///< series truncation n
    bool accelerate = true;            ///< tail averaging of eta partial sums
    std::uint32_t accel_order = 30;    ///< number of averaging rounds
    double hl_constant = 2.0;          ///< C in the validity bound |Im z| <= 2 pi n / C
    double guard_radius = default_guard_radius;
    double tolerance = 1e-10;          ///< zero refinement target for |zeta_hat|

    void validate() const
    {
        if (n_terms < 1) {
            throw ConfigError("n_terms must be >= 1");
        }
        if (!(hl_constant > 1.0)) {
            throw ConfigError("hl_constant must be > 1");
        }
        if (!(guard_radius > 0.0)) {
            throw ConfigError("guard_radius must be > 0");
        }
        if (!(tolerance > 0.0)) {
            throw ConfigError("tolerance must be > 0");
        }
        if (accelerate && (accel_order < 1 || accel_order > n_terms)) {
            throw ConfigError("accel_order must lie in [1, n_terms] when accelerating");
        }
    }

    /// Copy with acceleration on and at least `min_order` averaging rounds.
    EvalConfig accelerated(std::uint32_t min_order) const
    {
        EvalConfig c = *this;
        c.accelerate = true;
        if (c.accel_order < min_order) {
            c.accel_order = min_order;
        }
        return c;
    }

    friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

} // namespace csl

#endif // CSL_CONFIG_HPP
