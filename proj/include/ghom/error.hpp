#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ghom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed pattern or configuration text. Carries the 1-based line number
/// (0 when the failure is not tied to a line).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Linear solver failure (non-convergence, loss of definiteness).
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace ghom
