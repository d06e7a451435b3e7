#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace thermobeam {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A sampled rigidity or damping value is not strictly positive.
class CoefficientPositivityError : public InvalidArgument {
public:
    CoefficientPositivityError(const std::string& field, std::size_t node, double x, double value);

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Vectors or states living on different grids.
class DimensionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Zero pivot in a direct solve. Signals an assembly bug for valid coefficients.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// A state carries NaN or Inf.
class StateCorruptionError : public Error {
public:
    using Error::Error;
};

/// Energy grew between records beyond the sentinel threshold.
class InstabilityError : public Error {
public:
    using Error::Error;
};

class DegenerateFitError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Problem too large for the requested method.
class CapacityError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Malformed configuration text; carries the 1-based line number.
class ConfigParseError : public InvalidArgument {
public:
    ConfigParseError(std::size_t line, const std::string& message);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Every violated constraint of a configuration, reported together.
class ConfigValidationError : public InvalidArgument {
public:
    explicit ConfigValidationError(std::vector<std::string> violations);

    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace thermobeam
