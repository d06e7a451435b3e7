#pragma once

#include "thermobeam/analysis.hpp"
#include "thermobeam/config.hpp"
#include "thermobeam/diagnostics.hpp"
#include "thermobeam/operators.hpp"
#include "thermobeam/timestepper.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thermobeam {

struct RunSummary {
    std::string name;
    std::string fit_status;  ///< "ok", "degenerate" or "insufficient-data"
    std::string fit_message;
    std::optional<DecayFit> fit;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double max_balance_residual = 0.0;
    double budget_defect = 0.0;
    std::size_t energy_increase_steps = 0;
    double max_step_g_increase = 0.0;
    LyapunovConstants constants;
    std::optional<SpectrumReport> spectrum;
    std::vector<std::string> warnings;
};

/// Key = value lines, parseable by the same reader as configs.
void write_summary(std::ostream& os, const RunSummary& summary);

struct SimulateOptions {
    double initial_scale = 1.0;  ///< multiplies the initial state
    bool with_spectrum = false;
};

struct Simulation {
    BlockOperator op;
    Trajectory trajectory;
    RunSummary summary;
};

BlockOperator build_operator(const ScenarioConfig& cfg);

/// Initial state on the config's grid. Appends resolution and clipping notes to warnings.
BeamState initial_state(const ScenarioConfig& cfg, const Grid& grid, std::vector<std::string>* warnings = nullptr);

/// grid -> coefficients -> operator -> plan -> run -> diagnostics -> fit, in memory.
Simulation simulate(const ScenarioConfig& cfg, const SimulateOptions& options = {});

struct RunOutput {
    std::filesystem::path diagnostics_path;
    std::filesystem::path final_state_path;
    std::filesystem::path summary_path;
    RunSummary summary;
};

/// THERMOBEAM_OUT when set, otherwise ./out.
std::filesystem::path default_output_directory();

/// Runs the scenario and writes <name>_diagnostics.csv, <name>_final_state.csv
/// and <name>_summary.txt into out_dir (created if missing).
RunOutput run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                       const SimulateOptions& options = {});

/// Independent runs over sigma^2 values, executed concurrently. Each run is
/// named <name>_sigma2_<value> and writes its own files.
std::vector<RunOutput> run_sweep(const ScenarioConfig& base, const std::vector<double>& sigma2_values,
                                 const std::filesystem::path& out_dir, const SimulateOptions& options = {});

}  // namespace thermobeam
