#include "thermobeam/errors.hpp"

#include <fmt/format.h>

namespace thermobeam {

CoefficientPositivityError::CoefficientPositivityError(const std::string& field, std::size_t node,
                                                       double x, double value)
    : InvalidArgument(fmt::format("coefficient {} must be strictly positive, got {} at node {} (x = {})",
                                  field, value, node, x)),
      node_(node) {}

ConfigParseError::ConfigParseError(std::size_t line, const std::string& message)
    : InvalidArgument(fmt::format("line {}: {}", line, message)), line_(line) {}

namespace {
std::string join_violations(const std::vector<std::string>& violations) {
    std::string out = "invalid configuration:";
    for (const auto& v : violations) {
        out += "\n  - ";
        out += v;
    }
    return out;
}
}  // namespace

ConfigValidationError::ConfigValidationError(std::vector<std::string> violations)
    : InvalidArgument(join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace thermobeam
