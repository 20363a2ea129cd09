#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expderiv {

enum class ErrorKind {
    Pole,               // evaluation point sits on (or a stencil crosses) x = 0
    UnsupportedOrder,   // derivative order beyond the binary64 cap
    OrderOutOfRange,    // request exceeds a precomputed table
    Domain,             // argument outside the operation's domain
    DivergentSeries,
    NonConvergence,     // series truncation would exceed max_terms
    OutOfRadius,
    SingularParameter,
    ConvergenceFailure, // quadrature tolerance not reached within max_panels
    UnstableLimit,
    Overflow,           // mathematically finite value not representable in binary64
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by quadrature when the tolerance is unreachable; keeps the best estimate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double best_err)
        : Error(ErrorKind::ConvergenceFailure, what), best_value_(best_value), best_err_(best_err) {}

    double best_value() const noexcept { return best_value_; }
    double best_err_estimate() const noexcept { return best_err_; }

private:
    double best_value_;
    double best_err_;
};

} // namespace expderiv
