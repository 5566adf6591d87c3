#ifndef CSL_ZERO_FINDER_HPP
#define CSL_ZERO_FINDER_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "csl/config.hpp"
#include "csl/errors.hpp"
#include "csl/parallel.hpp"
#include "csl/series.hpp"

namespace csl {

/// A zero 1/2 + i*ordinate of zeta on the critical line.
struct ZeroRecord {
    std::uint32_t index = 0;   ///< 1-based, ascending ordinate within one result
    double ordinate = 0.0;
    double residual_mag = 0.0; ///< |zeta_hat(1/2 + i*ordinate)|
    bool refined = false;
    std::uint32_t iterations = 0;
};

inline constexpr double max_scan_step = 0.5;
inline constexpr double zero_dedup_radius = 1e-6;
inline constexpr std::uint32_t max_newton_iterations = 50;

struct ScanWindow {
    double t_min = 10.0;
    double t_max = 50.0;
    double step = 0.05;
    /// Grid minima of |zeta_hat| above this are not refined.
    double coarse_threshold = 0.5;

    void validate() const
    {
        if (!(t_min >= 0.0) || !(t_max > t_min)) {
            throw ConfigError("scan window needs 0 <= t_min < t_max");
        }
        if (!(step > 0.0)) {
            throw ConfigError("scan step must be > 0");
        }
        if (step > max_scan_step) {
            throw WindowTooCoarse("scan step " + std::to_string(step) + " exceeds "
                                  + std::to_string(max_scan_step) + " and can skip zeros");
        }
        if (!(coarse_threshold > 0.0)) {
            throw ConfigError("coarse threshold must be > 0");
        }
    }
};

inline Complex critical_line_point(double t) { return {0.5, t}; }

/// Newton iteration on zeta_hat from 1/2 + i*t_seed, with the derivative from the
/// term-wise differentiated eta series. Stops once |zeta_hat| <= config.tolerance.
inline ZeroRecord refine_zero(double t_seed, const EvalConfig& config)
{
    Complex z = critical_line_point(t_seed);
    for (std::uint32_t iter = 0; iter <= max_newton_iterations; ++iter) {
        const auto [value, derivative] = zeta_hat_eta_with_derivative(z, config);
        if (std::abs(value.value) <= config.tolerance) {
            ZeroRecord rec;
            rec.ordinate = z.imag();
            rec.residual_mag = std::abs(zeta_hat_eta(critical_line_point(rec.ordinate), config).value);
            rec.refined = rec.residual_mag <= config.tolerance;
            rec.iterations = iter;
            return rec;
        }
        if (iter == max_newton_iterations || derivative == Complex{0.0, 0.0}) {
            break;
        }
        z -= value.value / derivative;
        if (!(z.real() > 0.0 && z.real() < 1.0)) {
            throw EscapedStrip("Newton iterate left the critical strip from seed t = "
                               + std::to_string(t_seed) + " (z = " + to_string(z) + ")");
        }
    }
    throw NoConvergence("Newton did not reach |zeta_hat| <= tolerance within "
                        + std::to_string(max_newton_iterations) + " iterations from t = "
                        + std::to_string(t_seed));
}

/// Grid scan of |zeta_hat(1/2 + it)| followed by Newton refinement of every
/// sufficiently deep local minimum. Seeds that fail to converge are dropped.
inline std::vector<ZeroRecord> scan_zeros(const ScanWindow& window, const EvalConfig& config)
{
    window.validate();
    config.validate();
    if (!config.accelerate) {
        throw ConfigError("scan_zeros needs an accelerated configuration");
    }

    // One padding node on each side so minima sitting on the window edge are seen.
    std::vector<double> grid;
    for (std::int64_t i = -1;; ++i) {
        const double t = window.t_min + static_cast<double>(i) * window.step;
        grid.push_back(t);
        if (t > window.t_max) {
            break;
        }
    }
    const auto magnitude = parallel_map(grid.size(), [&](std::size_t i) {
        return std::abs(zeta_hat_eta(critical_line_point(grid[i]), config).value);
    });

    std::vector<double> seeds;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (magnitude[i] <= magnitude[i - 1] && magnitude[i] < magnitude[i + 1]
            && magnitude[i] < window.coarse_threshold) {
            seeds.push_back(grid[i]);
        }
    }

    const auto refined = parallel_map(seeds.size(), [&](std::size_t i) -> std::optional<ZeroRecord> {
        try {
            return refine_zero(seeds[i], config);
        } catch (const NoConvergence&) {
            return std::nullopt;
        } catch (const EscapedStrip&) {
            return std::nullopt;
        }
    });

    std::vector<ZeroRecord> zeros;
    for (const auto& r : refined) {
        if (r && r->ordinate >= window.t_min && r->ordinate <= window.t_max) {
            zeros.push_back(*r);
        }
    }
    std::sort(zeros.begin(), zeros.end(),
              [](const ZeroRecord& a, const ZeroRecord& b) { return a.ordinate < b.ordinate; });
    std::vector<ZeroRecord> unique;
    for (const auto& z : zeros) {
        if (unique.empty() || z.ordinate - unique.back().ordinate > zero_dedup_radius) {
            unique.push_back(z);
        }
    }
    for (std::size_t i = 0; i < unique.size(); ++i) {
        unique[i].index = static_cast<std::uint32_t>(i + 1);
    }
    return unique;
}

/// Reads a zero table: one decimal ordinate per line, '#' comments and blank
/// lines ignored, strictly increasing.
inline std::vector<double> parse_zero_table(std::istream& in, const std::string& source)
{
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        const char* begin = line.data() + first;
        const char* end = line.data() + last + 1;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
            throw ParseError(source, line_no, "not a decimal number: '" + std::string(begin, end) + "'");
        }
        if (!out.empty() && !(value > out.back())) {
            throw NonMonotonicError(source + ":" + std::to_string(line_no)
                                    + ": ordinates must be strictly increasing");
        }
        out.push_back(value);
    }
    return out;
}

inline std::vector<double> load_zero_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }
    return parse_zero_table(in, path);
}

struct ZeroMatch {
    std::uint32_t found_index = 0;
    std::size_t reference_index = 0;  ///< 1-based position in the reference list
    double found = 0.0;
    double reference = 0.0;
    double delta = 0.0;               ///< found - reference
};

struct CrosscheckReport {
    std::vector<ZeroMatch> matched;
    std::vector<ZeroRecord> unmatched_found;
    std::vector<std::pair<std::size_t, double>> unmatched_reference;  ///< (1-based index, ordinate)
    double max_delta = 0.0;

    bool all_matched() const { return unmatched_found.empty() && unmatched_reference.empty(); }
};

/// Greedy one-to-one matching, closest pairs first, within `tol`. Unmatched
/// reference ordinates are reported only inside [window_min, window_max].
inline CrosscheckReport crosscheck_zeros(const std::vector<ZeroRecord>& found,
                                         const std::vector<double>& reference, double tol,
                                         std::optional<std::pair<double, double>> window = std::nullopt)
{
    struct Candidate {
        double distance;
        std::size_t f, r;
    };
    std::vector<Candidate> candidates;
    for (std::size_t f = 0; f < found.size(); ++f) {
        const double t = found[f].ordinate;
        auto it = std::lower_bound(reference.begin(), reference.end(), t - tol);
        for (; it != reference.end() && *it <= t + tol; ++it) {
            candidates.push_back({std::abs(t - *it), f, static_cast<std::size_t>(it - reference.begin())});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.f != b.f) return a.f < b.f;
        return a.r < b.r;
    });

    std::vector<bool> f_used(found.size(), false), r_used(reference.size(), false);
    CrosscheckReport report;
    for (const auto& c : candidates) {
        if (f_used[c.f] || r_used[c.r]) {
            continue;
        }
        f_used[c.f] = r_used[c.r] = true;
        report.matched.push_back({found[c.f].index, c.r + 1, found[c.f].ordinate, reference[c.r],
                                  found[c.f].ordinate - reference[c.r]});
        report.max_delta = std::max(report.max_delta, c.distance);
    }
    std::sort(report.matched.begin(), report.matched.end(),
              [](const ZeroMatch& a, const ZeroMatch& b) { return a.reference_index < b.reference_index; });
    for (std::size_t f = 0; f < found.size(); ++f) {
        if (!f_used[f]) report.unmatched_found.push_back(found[f]);
    }
    for (std::size_t r = 0; r < reference.size(); ++r) {
        const bool in_window = !window || (reference[r] >= window->first && reference[r] <= window->second);
        if (!r_used[r] && in_window) report.unmatched_reference.emplace_back(r + 1, reference[r]);
    }
    return report;
}

} // namespace csl

#endif // CSL_ZERO_FINDER_HPP
