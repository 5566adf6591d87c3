#ifndef CSL_REPORT_HPP
#define CSL_REPORT_HPP

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "csl/config.hpp"
#include "csl/errors.hpp"
#include "csl/experiments.hpp"
#include "csl/functional_equation.hpp"
#include "csl/series.hpp"
#include "csl/zero_finder.hpp"

namespace csl {

using Json = nlohmann::ordered_json;

/// Bad command-line input; the CLI maps it to exit code 2.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

/// Decimal with 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

/// Parses "a+bi" / "a-bi" with decimal components and no spaces.
inline std::optional<Complex> parse_complex(std::string_view text)
{
    const char* p = text.data();
    const char* end = p + text.size();
    double re = 0.0;
    auto r1 = std::from_chars(p, end, re);
    if (r1.ec != std::errc{} || r1.ptr == end) {
        return std::nullopt;
    }
    p = r1.ptr;
    const char sign = *p++;
    if ((sign != '+' && sign != '-') || p == end || *p == '+' || *p == '-') {
        return std::nullopt;
    }
    double im = 0.0;
    auto r2 = std::from_chars(p, end, im);
    if (r2.ec != std::errc{} || r2.ptr + 1 != end || *r2.ptr != 'i') {
        return std::nullopt;
    }
    if (sign == '-') {
        im = -im;
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
        return std::nullopt;
    }
    return Complex{re, im};
}

namespace detail {

inline void write_json(const Json& j, std::string& out, int indent, int depth)
{
    const auto newline = [&](int d) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(it.key()).dump();
            out += ": ";
            write_json(it.value(), out, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            write_json(v, out, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// Pretty-printed JSON whose floats carry 17 significant digits.
inline std::string dump_json(const Json& j)
{
    std::string out;
    detail::write_json(j, out, 2, 0);
    out += '\n';
    return out;
}

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const std::vector<Complex>& zs)
{
    Json arr = Json::array();
    for (Complex z : zs) arr.push_back(to_json(z));
    return arr;
}

inline Json to_json(const EvalConfig& c)
{
    return Json{{"n_terms", c.n_terms},         {"accelerate", c.accelerate},
                {"accel_order", c.accel_order}, {"hl_constant", c.hl_constant},
                {"guard_radius", c.guard_radius}, {"tolerance", c.tolerance}};
}

inline Json to_json(const SeriesValue& v)
{
    return Json{{"value", to_json(v.value)},
                {"n_used", v.n_used},
                {"mode", std::string(to_string(v.mode))},
                {"est_error", v.est_error}};
}

inline Json to_json(const ResidualReport& r)
{
    return Json{{"point", to_json(r.point)}, {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)},
                {"residual", r.residual}, {"config", to_json(r.config_used)}};
}

inline Json to_json(const ZeroRecord& z)
{
    return Json{{"index", z.index},
                {"ordinate", z.ordinate},
                {"residual_mag", z.residual_mag},
                {"refined", z.refined},
                {"iterations", z.iterations}};
}

inline Json to_json(const std::vector<ZeroRecord>& zs)
{
    Json arr = Json::array();
    for (const auto& z : zs) arr.push_back(to_json(z));
    return arr;
}

inline Json to_json(const CrosscheckReport& r)
{
    Json matched = Json::array();
    for (const auto& m : r.matched) {
        matched.push_back(Json{{"found_index", m.found_index},
                               {"reference_index", m.reference_index},
                               {"found", m.found},
                               {"reference", m.reference},
                               {"delta", m.delta}});
    }
    Json missing = Json::array();
    for (const auto& [index, t] : r.unmatched_reference) {
        missing.push_back(Json{{"reference_index", index}, {"reference", t}});
    }
    return Json{{"matched", matched},
                {"unmatched_found", to_json(r.unmatched_found)},
                {"unmatched_reference", missing},
                {"max_delta", r.max_delta},
                {"all_matched", r.all_matched()}};
}

inline Json to_json(const RatioReport& r)
{
    return Json{{"point", to_json(r.point)},
                {"n_base", r.n_base},
                {"m_doublings", r.m_doublings},
                {"ratios", to_json(r.ratios)},
                {"zeta_hat_ratios", to_json(r.zeta_hat_ratios)},
                {"moduli", r.moduli},
                {"step_exponents", to_json(r.step_exponents)},
                {"fitted_exponent", to_json(r.fitted_exponent)},
                {"reference_exponent", to_json(r.reference_exponent)},
                {"phase_tracked", r.phase_tracked}};
}

inline Json to_json(const ScalingReport& r)
{
    Json domain = Json::array();
    for (bool ok : r.domain_ok) domain.push_back(ok);
    return Json{{"point", to_json(r.point)},
                {"n_grid", r.n_grid},
                {"errors", r.errors},
                {"domain_ok", domain},
                {"fitted_slope", r.fitted_slope},
                {"reference_slope", r.reference_slope},
                {"reference", to_json(r.reference)},
                {"reference_est_error", r.reference_est_error},
                {"hl_constant", r.hl_constant}};
}

/// Per-invocation metadata. The timestamp is the only field that varies
/// between identical runs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::string timestamp;
    EvalConfig config;
};

inline std::string iso8601_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

/// Top-level report: {manifest, config, results}.
inline Json make_report(const RunManifest& manifest, Json results)
{
    Json params = Json::object();
    for (const auto& [k, v] : manifest.parameters) params[k] = v;
    return Json{{"manifest",
                 Json{{"command", manifest.command}, {"parameters", params}, {"timestamp", manifest.timestamp}}},
                {"config", to_json(manifest.config)},
                {"results", std::move(results)}};
}

/// Comma-separated, '.' decimal point, header row, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size())
    {
        append_row(header);
    }

    void append_row(const std::vector<std::string>& cells)
    {
        if (cells.size() != columns_) {
            throw DomainError("CSV row has " + std::to_string(cells.size()) + " cells, expected "
                              + std::to_string(columns_));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    const std::string& str() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

/// Writes via a sibling temp file and rename, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw UsageError("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw UsageError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw UsageError("cannot move report into place at " + path.string() + ": " + ec.message());
    }
}

} // namespace csl

#endif // CSL_REPORT_HPP
