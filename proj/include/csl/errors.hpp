#ifndef CSL_ERRORS_HPP
#define CSL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csl {

/// Base of every error the library raises. `name()` is the stable identifier
/// surfaced by the CLI (e.g. "PrefactorSingularityError").
class Error : public std::runtime_error {
public:
    Error(const char* name, const std::string& what)
        : std::runtime_error(what), name_(name) {}

    const char* name() const noexcept { return name_; }

private:
    const char* name_;
};

#define CSL_DEFINE_ERROR(Type)                                                 \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, what) {}         \
    }

// special functions
CSL_DEFINE_ERROR(PoleError);
CSL_DEFINE_ERROR(OverflowError);

// series evaluation
CSL_DEFINE_ERROR(DomainError);
CSL_DEFINE_ERROR(SingularityError);
CSL_DEFINE_ERROR(PrefactorSingularityError);
CSL_DEFINE_ERROR(DivisionByNearZero);
CSL_DEFINE_ERROR(ConfigError);

// zero finding
CSL_DEFINE_ERROR(NoConvergence);
CSL_DEFINE_ERROR(EscapedStrip);
CSL_DEFINE_ERROR(WindowTooCoarse);
CSL_DEFINE_ERROR(NonMonotonicError);

// experiments
CSL_DEFINE_ERROR(InsufficientDomain);
CSL_DEFINE_ERROR(BudgetExceeded);

#undef CSL_DEFINE_ERROR

/// Malformed zero-table input. Carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& detail)
        : Error("ParseError", source + ":" + std::to_string(line) + ": " + detail),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace csl

#endif // CSL_ERRORS_HPP
