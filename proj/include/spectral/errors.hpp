#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-range parameters, unsupported domain classes.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Degenerate or inverted element met during FEM assembly.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Integration or bracketing failure in a numerical routine.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Iterative solver stopped at its iteration cap; carries the last residual.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : NumericError(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

} // namespace spectral
