#pragma once

#include <stdexcept>
#include <string>

namespace eiko {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument at an API boundary (zero spinor, non-finite value, ...).
struct InvalidInputError : Error {
    using Error::Error;
};

/// A precondition stated by an operation does not hold (e.g. a seed value
/// that is not a root of the generating equation).
struct PreconditionError : Error {
    using Error::Error;
};

/// Syntax or identifier error while parsing DSL text. Positions are 1-based.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
    int line;
    int column;
};

/// Division by a vanishing denominator during evaluation. Carries the
/// printed form of the offending subexpression.
struct PoleError : Error {
    explicit PoleError(const std::string& subexpr)
        : Error("pole: denominator vanishes in '" + subexpr + "'"),
          subexpression(subexpr) {}
    std::string subexpression;
};

/// A named parameter was used but never bound.
struct UnboundParameterError : Error {
    explicit UnboundParameterError(const std::string& name_)
        : Error("unbound parameter '" + name_ + "'"), name(name_) {}
    std::string name;
};

/// Evaluation requested at a branching/singular point (Q ~ 0, D ~ 0, ...).
struct SingularPointError : Error {
    using Error::Error;
};

/// A finite-difference stencil touches a flagged or singular cell.
struct InsufficientStencilError : Error {
    using Error::Error;
};

/// No null ray connecting the Cauchy slice to the requested target was found.
struct NoRayFoundError : Error {
    using Error::Error;
};

}  // namespace eiko
