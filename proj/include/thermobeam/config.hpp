#pragma once

#include "thermobeam/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thermobeam {

enum class InitialKind {
    gauss_theta,   ///< u = v = 0, theta = A exp(-(x - c)^2 / sigma2)
    zero,
    manufactured,  ///< samples of the manufactured solution at t = 0
    custom,        ///< x,u,v,theta samples read from a CSV file
};

std::string to_string(InitialKind kind);

/// Flat scenario description. Keys in the text form are the field names below.
struct ScenarioConfig {
    std::string name = "scenario";
    double length = 1.0;
    std::size_t n_cells = 400;
    double dt = 1e-3;
    double t_end = 10.0;
    CoefficientFunction p = CoefficientFunction::constant(1.0);
    CoefficientFunction q = CoefficientFunction::constant(1.0);
    double kappa = 1.0;
    double eta = 1.0;
    InitialKind initial = InitialKind::gauss_theta;
    double amplitude = 0.2;
    double sigma2 = 1e-2;
    std::optional<double> center;  ///< defaults to length / 2
    std::string custom_file;
    std::optional<double> epsilon;  ///< nullopt means "auto"
    std::size_t record_stride = 10;
    std::uint64_t seed = 0;
    std::optional<double> fit_window_start;  ///< defaults to t_end / 10
    std::optional<double> fit_window_end;    ///< defaults to 4 t_end / 5

    [[nodiscard]] double pulse_center() const { return center.value_or(0.5 * length); }
    [[nodiscard]] std::pair<double, double> fit_window() const {
        return {fit_window_start.value_or(t_end / 10.0), fit_window_end.value_or(0.8 * t_end)};
    }
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys
/// and malformed values raise ConfigParseError with the line number. Does not
/// validate cross-field constraints.
ScenarioConfig parse_config(std::string_view text, std::string default_name = "scenario");

/// Every violated constraint, empty when the config is runnable.
std::vector<std::string> validation_errors(const ScenarioConfig& cfg);

/// Throws ConfigValidationError listing all violations.
void validate(const ScenarioConfig& cfg);

/// Reads, parses and validates a config file. The name defaults to the file stem.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Round-trips through parse_config.
std::string format_config(const ScenarioConfig& cfg);

struct Preset {
    std::string name;
    std::string description;
    ScenarioConfig config;
};

const std::vector<Preset>& presets();
std::optional<ScenarioConfig> find_preset(std::string_view name);

/// A preset name or a path to a config file.
ScenarioConfig resolve_config(const std::string& name_or_path);

}  // namespace thermobeam
