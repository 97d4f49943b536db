#pragma once

#include <stdexcept>
#include <string>

namespace scherk {

enum class ErrorKind {
    Validation,          // malformed input or invariant violation
    DomainError,         // argument outside the operation's domain
    ConfigurationError,  // geometric arrangement precondition failed
    CothBoundViolated,
    NonIntegrableTail,
    NotFound,
    BracketFailure,
    NoBracket,
    StepUnderflow,
    NearSingularity,
    TooCloseToWall,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for kinds that reject user input rather than report a numerical failure.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by eval_barrier below the truncation point; `d` is the offending signed distance.
class TooCloseToWall : public Error {
public:
    TooCloseToWall(double d, double d_min)
        : Error(ErrorKind::TooCloseToWall,
                "d = " + std::to_string(d) + " < d_min = " + std::to_string(d_min)),
          d_(d) {}
    double d() const noexcept { return d_; }

private:
    double d_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Validation, what);
}

}  // namespace scherk
