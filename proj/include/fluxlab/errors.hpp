#pragma once

#include <stdexcept>
#include <string>

namespace fluxlab {

// Exit-code contract used by the CLI: validation failures map to 2,
// precision failures to 3, configuration/parameter errors to 4.

// A potential (or other input) failed a structural requirement.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The well curvature at a minimum is non-positive.
class DegenerateWellError : public ValidationError {
public:
    explicit DegenerateWellError(const std::string& msg) : ValidationError(msg) {}
};

// A numeric routine could not reach its accuracy target.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature did not converge to the requested tolerance.
class QuadratureError : public PrecisionError {
public:
    QuadratureError(const std::string& msg, double achieved)
        : PrecisionError(msg), achieved_residual(achieved) {}
    double achieved_residual;
};

// Tail refinement hit a pole of the logarithmic derivative.
class RefinementError : public PrecisionError {
public:
    explicit RefinementError(const std::string& msg) : PrecisionError(msg) {}
};

// Bad parameters, unknown names, malformed configs.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed numeric input (e.g. a non-Hermitian matrix passed to the
// Hermitian eigensolver).
class InputError : public ParameterError {
public:
    explicit InputError(const std::string& msg) : ParameterError(msg) {}
};

} // namespace fluxlab
