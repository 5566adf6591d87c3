#ifndef CSL_CLI_HPP
#define CSL_CLI_HPP

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csl/config.hpp"
#include "csl/experiments.hpp"
#include "csl/functional_equation.hpp"
#include "csl/parallel.hpp"
#include "csl/report.hpp"
#include "csl/series.hpp"
#include "csl/zero_finder.hpp"

namespace csl::cli {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

struct ConfigFlags {
    std::uint64_t n_terms = 10'000;
    bool accelerate = true;
    std::uint32_t accel_order = 30;
    double hl_constant = 2.0;
    double guard_radius = default_guard_radius;
    double tolerance = 1e-10;

    EvalConfig to_config() const
    {
        EvalConfig c{n_terms, accelerate, accel_order, hl_constant, guard_radius, tolerance};
        try {
            c.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

struct Options {
    ConfigFlags config;
    std::string z_text;
    std::string format = "json";
    std::string out_path;
    std::string csv_path;
    std::string json_path;

    // residual grid
    double re_min = 0.1, re_max = 0.9, im_min = 0.0, im_max = 30.0;
    unsigned re_steps = 9, im_steps = 13;
    double residual_tol = 1e-8;

    // zeros
    double t_min = 10.0, t_max = 50.0, t_step = 0.05, threshold = 0.5, match_tol = 1e-6;
    std::string reference_path;

    // doubling
    unsigned zero_index = 0;
    std::uint64_t n_base = 4096;
    unsigned m = 5;

    // errscan
    std::uint64_t n_min = 256, n_max = 65'536;
};

namespace detail {

inline void add_config_flags(CLI::App* sub, ConfigFlags& flags, bool accelerate_default)
{
    flags.accelerate = accelerate_default;
    sub->add_option("--n", flags.n_terms, "series truncation n")->capture_default_str();
    sub->add_flag("--accelerate,!--no-accelerate", flags.accelerate, "tail-average the eta series")
        ->capture_default_str();
    sub->add_option("--accel-order", flags.accel_order, "averaging rounds")->capture_default_str();
    sub->add_option("-C,--hl-constant", flags.hl_constant, "constant C > 1 in |Im z| <= 2 pi n / C")
        ->capture_default_str();
    sub->add_option("--guard", flags.guard_radius, "singularity guard radius")->capture_default_str();
    sub->add_option("--tolerance", flags.tolerance, "zero refinement tolerance")->capture_default_str();
}

inline Complex require_complex(const std::string& text)
{
    if (auto z = parse_complex(text)) {
        return *z;
    }
    throw UsageError("malformed complex number '" + text + "' (expected a+bi or a-bi)");
}

inline void emit(const std::string& content, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

inline std::string complex_text(Complex z)
{
    return format_double(z.real()) + (std::signbit(z.imag()) ? "" : "+") + format_double(z.imag()) + "i";
}

inline std::vector<double> linear_grid(double lo, double hi, unsigned steps)
{
    std::vector<double> out;
    if (steps == 1) {
        out.push_back(lo);
        return out;
    }
    for (unsigned i = 0; i < steps; ++i) {
        out.push_back(i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return out;
}

inline bool is_usage_error(const Error& e)
{
    const std::string_view name = e.name();
    return name == "UsageError" || name == "ConfigError" || name == "ParseError" || name == "NonMonotonicError"
           || name == "WindowTooCoarse";
}

// ---------------------------------------------------------------------------

inline int cmd_eval(const Options& o, RunManifest& manifest, std::ostream& out)
{
    const Complex z = require_complex(o.z_text);
    if (o.format != "json" && o.format != "text") {
        throw UsageError("--format must be json or text");
    }
    manifest.config = o.config.to_config();
    const auto& cfg = manifest.config;

    const SeriesValue eta = zeta_hat_eta(z, cfg);
    const Complex zeta_n = zeta_partial(z, cfg.n_terms);
    const Complex xi_n = eta_partial(z, cfg.n_terms);
    const Complex hat_n = zeta_hat_regularized(z, cfg.n_terms, cfg.guard_radius);

    if (o.format == "text") {
        std::ostringstream s;
        const auto row = [&](const char* label, const std::string& value) {
            s << std::left << std::setw(24) << label << value << '\n';
        };
        row("point", complex_text(z));
        row("n", std::to_string(cfg.n_terms));
        row("zeta_partial", complex_text(zeta_n));
        row("eta_partial", complex_text(xi_n));
        row("zeta_hat_regularized", complex_text(hat_n));
        row("zeta_hat_eta", complex_text(eta.value));
        row("zeta_hat_eta.est_error", format_double(eta.est_error));
        row("zeta_hat_eta.n_used", std::to_string(eta.n_used));
        emit(s.str(), o.out_path, out);
        return exit_ok;
    }

    Json results{{"point", to_json(z)},
                 {"n", cfg.n_terms},
                 {"zeta_partial", to_json(zeta_n)},
                 {"eta_partial", to_json(xi_n)},
                 {"zeta_hat_regularized", to_json(hat_n)},
                 {"zeta_hat_eta", to_json(eta)}};
    emit(dump_json(make_report(manifest, std::move(results))), o.out_path, out);
    return exit_ok;
}

inline int cmd_residual(const Options& o, RunManifest& manifest, std::ostream& out, std::ostream& err)
{
    manifest.config = o.config.to_config();
    const auto& cfg = manifest.config;
    for (double v : {o.re_min, o.re_max}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw UsageError("real-part grid bounds must lie in [0, 1]");
        }
    }
    if (o.re_steps < 1 || o.im_steps < 1 || o.re_max < o.re_min || o.im_max < o.im_min) {
        throw UsageError("grid needs steps >= 1 and min <= max");
    }
    if (!(o.residual_tol > 0.0)) {
        throw UsageError("--tol must be > 0");
    }

    std::vector<Complex> points;
    for (double re : linear_grid(o.re_min, o.re_max, o.re_steps)) {
        for (double im : linear_grid(o.im_min, o.im_max, o.im_steps)) {
            points.emplace_back(re, im);
        }
    }
    const auto rows = parallel_map(points.size(), [&](std::size_t i) -> std::optional<ResidualReport> {
        try {
            return functional_equation_residual(points[i], cfg);
        } catch (const Error&) {
            return std::nullopt;
        }
    });

    CsvWriter csv({"re", "im", "residual", "lhs_re", "lhs_im", "rhs_re", "rhs_im"});
    Json json_rows = Json::array();
    double worst = 0.0;
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string re = format_double(points[i].real());
        const std::string im = format_double(points[i].imag());
        if (!rows[i]) {
            csv.append_row({re, im, "skipped", "", "", "", ""});
            json_rows.push_back(Json{{"point", to_json(points[i])}, {"skipped", true}});
            continue;
        }
        const auto& r = *rows[i];
        ++evaluated;
        worst = std::max(worst, r.residual);
        csv.append_row({re, im, format_double(r.residual), format_double(r.lhs.real()), format_double(r.lhs.imag()),
                        format_double(r.rhs.real()), format_double(r.rhs.imag())});
        json_rows.push_back(Json{{"point", to_json(r.point)},
                                 {"lhs", to_json(r.lhs)},
                                 {"rhs", to_json(r.rhs)},
                                 {"residual", r.residual}});
    }
    const bool pass = evaluated > 0 && worst <= o.residual_tol;

    emit(csv.str(), o.out_path, out);
    if (!o.json_path.empty()) {
        Json results{{"rows", json_rows},
                     {"evaluated", evaluated},
                     {"skipped", points.size() - evaluated},
                     {"max_residual", worst},
                     {"tolerance", o.residual_tol},
                     {"pass", pass}};
        write_file_atomic(o.json_path, dump_json(make_report(manifest, std::move(results))));
    }
    err << "max_residual=" << format_double(worst) << " evaluated=" << evaluated
        << " skipped=" << points.size() - evaluated << " tol=" << format_double(o.residual_tol)
        << (pass ? " PASS" : " FAIL") << '\n';
    return pass ? exit_ok : exit_failure;
}

inline int cmd_zeros(const Options& o, RunManifest& manifest, std::ostream& out, std::ostream& err)
{
    manifest.config = o.config.to_config();
    ScanWindow window{o.t_min, o.t_max, o.t_step, o.threshold};
    try {
        window.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    std::optional<std::vector<double>> reference;
    if (!o.reference_path.empty()) {
        reference = load_zero_table(o.reference_path);
    }

    const auto zeros = scan_zeros(window, manifest.config);
    Json results{{"window", Json{{"t_min", window.t_min}, {"t_max", window.t_max}, {"step", window.step},
                                 {"coarse_threshold", window.coarse_threshold}}},
                 {"zeros", to_json(zeros)}};
    int code = exit_ok;
    if (reference) {
        const auto check = crosscheck_zeros(zeros, *reference, o.match_tol, std::pair{window.t_min, window.t_max});
        Json block = to_json(check);
        block["tolerance"] = o.match_tol;
        block["reference_path"] = o.reference_path;
        results["crosscheck"] = std::move(block);
        err << "crosscheck: " << check.matched.size() << " matched, " << check.unmatched_found.size()
            << " unmatched found, " << check.unmatched_reference.size() << " unmatched reference, max |delta| = "
            << format_double(check.max_delta) << '\n';
        if (!check.all_matched()) {
            code = exit_failure;
        }
    }
    err << zeros.size() << " zeros in [" << format_double(window.t_min) << ", " << format_double(window.t_max)
        << "]\n";
    emit(dump_json(make_report(manifest, std::move(results))), o.out_path, out);
    return code;
}

/// Ordinate of the index-th zero, from a table when given, else by scanning.
inline std::pair<double, std::string> resolve_zero(unsigned index, const std::string& reference_path,
                                                   const EvalConfig& config)
{
    if (index < 1) {
        throw UsageError("--zero-index is 1-based");
    }
    if (!reference_path.empty()) {
        const auto table = load_zero_table(reference_path);
        if (index > table.size()) {
            throw UsageError("unknown zero index " + std::to_string(index) + ": table " + reference_path
                             + " lists " + std::to_string(table.size()) + " zeros");
        }
        return {table[index - 1], "table:" + reference_path};
    }
    EvalConfig finder = config.accelerated(30);
    finder.n_terms = std::max<std::uint64_t>(finder.n_terms, 10'000);
    constexpr double scan_limit = 100.0;
    const auto zeros = scan_zeros(ScanWindow{0.0, scan_limit, 0.05}, finder);
    if (index > zeros.size()) {
        throw UsageError("unknown zero index " + std::to_string(index) + ": only "
                         + std::to_string(zeros.size()) + " zeros below t = 100 are available without --reference");
    }
    return {zeros[index - 1].ordinate, "zero_finder:scan[0,100]"};
}

inline int cmd_doubling(const Options& o, RunManifest& manifest, std::ostream& out, std::ostream& err)
{
    manifest.config = o.config.to_config();
    if (o.m < 1) {
        throw UsageError("--m must be >= 1");
    }
    if (o.n_base < 1 || o.m >= 63 || o.n_base > (default_doubling_budget >> o.m)) {
        throw UsageError("--nbase * 2^m must be between 1 and " + std::to_string(default_doubling_budget));
    }
    if (o.z_text.empty() == (o.zero_index == 0)) {
        throw UsageError("give exactly one of --z or --zero-index");
    }

    Complex point;
    std::string provenance = "user";
    if (!o.z_text.empty()) {
        point = require_complex(o.z_text);
    } else {
        auto [t, source] = resolve_zero(o.zero_index, o.reference_path, manifest.config);
        point = {0.5, t};
        provenance = std::move(source);
    }

    const auto report = h_doubling(point, o.n_base, o.m, manifest.config.guard_radius);
    const double modulus_proxy = modulus_limit_check(report);

    // Measured zeta_hat doubling constant next to the two candidate constants.
    const std::size_t tail = doubling_tail_length(o.m);
    Complex tail_mean{0.0, 0.0};
    for (std::size_t i = o.m - tail; i < o.m; ++i) tail_mean += report.zeta_hat_ratios[i];
    tail_mean /= static_cast<double>(tail);
    const Complex two_pow_one_minus_z = std::exp((1.0 - point) * std::numbers::ln2);
    const Complex two_pow_minus_z = std::exp(-point * std::numbers::ln2);

    Json results = to_json(report);
    results["provenance"] = provenance;
    if (o.zero_index) results["zero_index"] = o.zero_index;
    results["exponent_error"] = to_json(report.fitted_exponent - report.reference_exponent);
    results["modulus_limit"] = modulus_proxy;
    results["zeta_hat_doubling"] = Json{{"tail_mean_ratio", to_json(tail_mean)},
                                        {"candidate_two_pow_one_minus_z", to_json(two_pow_one_minus_z)},
                                        {"candidate_two_pow_minus_z", to_json(two_pow_minus_z)},
                                        {"distance_two_pow_one_minus_z", std::abs(tail_mean - two_pow_one_minus_z)},
                                        {"distance_two_pow_minus_z", std::abs(tail_mean - two_pow_minus_z)}};

    err << "point " << complex_text(point) << " (" << provenance << ")\n"
        << "fitted exponent    " << complex_text(report.fitted_exponent) << '\n'
        << "reference 1 - 2z   " << complex_text(report.reference_exponent) << '\n'
        << "difference         " << format_double(std::abs(report.fitted_exponent - report.reference_exponent))
        << '\n'
        << "tail |H_2n/H_n|    " << format_double(report.moduli.back()) << '\n';
    emit(dump_json(make_report(manifest, std::move(results))), o.out_path, out);
    return exit_ok;
}

inline int cmd_errscan(const Options& o, RunManifest& manifest, std::ostream& out, std::ostream& err)
{
    const Complex z = require_complex(o.z_text);
    manifest.config = o.config.to_config();
    if (o.n_min < 1 || o.n_max < o.n_min) {
        throw UsageError("need 1 <= --nmin <= --nmax");
    }
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = o.n_min; n <= o.n_max; n *= 2) {
        grid.push_back(n);
    }
    const auto report = error_scaling_scan(z, grid, manifest.config);

    if (!o.csv_path.empty()) {
        CsvWriter csv({"n", "error", "domain_ok"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.append_row({std::to_string(grid[i]), format_double(report.errors[i]),
                            report.domain_ok[i] ? "1" : "0"});
        }
        write_file_atomic(o.csv_path, csv.str());
    }
    err << "fitted slope " << format_double(report.fitted_slope) << " vs reference "
        << format_double(report.reference_slope) << '\n';
    emit(dump_json(make_report(manifest, to_json(report))), o.out_path, out);
    return exit_ok;
}

inline std::string join(const std::vector<std::string>& parts)
{
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ',';
        s += parts[i];
    }
    return s;
}

} // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Critical-strip zeta laboratory: series evaluation, functional-equation residuals, "
                 "zero finding and convergence experiments."};
    app.require_subcommand(1);
    Options o;

    auto* eval = app.add_subcommand("eval", "evaluate zeta_n, xi_n, zeta_hat_n and zeta_hat at one point");
    eval->add_option("--z", o.z_text, "point a+bi")->required();
    eval->add_option("--format", o.format, "json or text")->capture_default_str();
    eval->add_option("--out", o.out_path, "write report here instead of stdout");

    auto* residual = app.add_subcommand("residual", "functional-equation residual over a strip grid (CSV)");
    residual->add_option("--re-min", o.re_min)->capture_default_str();
    residual->add_option("--re-max", o.re_max)->capture_default_str();
    residual->add_option("--re-steps", o.re_steps)->capture_default_str();
    residual->add_option("--im-min", o.im_min)->capture_default_str();
    residual->add_option("--im-max", o.im_max)->capture_default_str();
    residual->add_option("--im-steps", o.im_steps)->capture_default_str();
    residual->add_option("--tol", o.residual_tol, "exit 1 if the max residual exceeds this")->capture_default_str();
    residual->add_option("--out", o.out_path, "CSV path (default stdout)");
    residual->add_option("--json", o.json_path, "also write a JSON report");

    auto* zeros = app.add_subcommand("zeros", "scan the critical line for zeros");
    zeros->add_option("--tmin", o.t_min)->capture_default_str();
    zeros->add_option("--tmax", o.t_max)->capture_default_str();
    zeros->add_option("--step", o.t_step)->capture_default_str();
    zeros->add_option("--threshold", o.threshold, "coarse |zeta_hat| threshold for seeds")->capture_default_str();
    zeros->add_option("--reference", o.reference_path, "zero table to cross-check against");
    zeros->add_option("--match-tol", o.match_tol)->capture_default_str();
    zeros->add_option("--out", o.out_path);

    auto* doubling = app.add_subcommand("doubling", "doubling ratios H_2n/H_n and exponent fit");
    doubling->add_option("--z", o.z_text, "point a+bi");
    doubling->add_option("--zero-index", o.zero_index, "use the k-th zero (1-based)");
    doubling->add_option("--reference", o.reference_path, "zero table for --zero-index");
    doubling->add_option("--nbase", o.n_base)->capture_default_str();
    doubling->add_option("--m", o.m, "number of doublings")->capture_default_str();
    doubling->add_option("--out", o.out_path);

    auto* errscan = app.add_subcommand("errscan", "error of zeta_hat_n against n and log-log slope");
    errscan->add_option("--z", o.z_text, "point a+bi")->required();
    errscan->add_option("--nmin", o.n_min)->capture_default_str();
    errscan->add_option("--nmax", o.n_max)->capture_default_str();
    errscan->add_option("--csv", o.csv_path, "write (n, error) pairs here");
    errscan->add_option("--out", o.out_path);

    detail::add_config_flags(eval, o.config, true);
    // each subcommand binds its own copy of the config flags
    ConfigFlags residual_flags, zeros_flags, doubling_flags, errscan_flags;
    detail::add_config_flags(residual, residual_flags, true);
    detail::add_config_flags(zeros, zeros_flags, true);
    detail::add_config_flags(doubling, doubling_flags, false);
    detail::add_config_flags(errscan, errscan_flags, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError: " << e.what() << '\n';
        return exit_usage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == residual) o.config = residual_flags;
    if (chosen == zeros) o.config = zeros_flags;
    if (chosen == doubling) o.config = doubling_flags;
    if (chosen == errscan) o.config = errscan_flags;

    RunManifest manifest;
    manifest.command = chosen->get_name();
    manifest.timestamp = iso8601_now();
    for (const CLI::Option* opt : chosen->get_options()) {
        if (opt->count() > 0 && opt->get_name() != "--help") {
            manifest.parameters[opt->get_name()] = detail::join(opt->results());
        }
    }

    try {
        if (chosen == eval) return detail::cmd_eval(o, manifest, out);
        if (chosen == residual) return detail::cmd_residual(o, manifest, out, err);
        if (chosen == zeros) return detail::cmd_zeros(o, manifest, out, err);
        if (chosen == doubling) return detail::cmd_doubling(o, manifest, out, err);
        return detail::cmd_errscan(o, manifest, out, err);
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << '\n';
        return detail::is_usage_error(e) ? exit_usage : exit_failure;
    }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

} // namespace csl::cli

#endif // CSL_CLI_HPP
