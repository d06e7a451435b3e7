#pragma once

#include "thermobeam/diagnostics.hpp"
#include "thermobeam/grid.hpp"
#include "thermobeam/operators.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace thermobeam {

inline constexpr const char* kDiagnosticsHeader = "t,energy,dissipation,balance_residual,f1,lyapunov_g";
inline constexpr const char* kStateHeader = "x,u,v,theta";

/// Scientific notation with 17 significant digits, enough to round-trip a double.
std::string format_value(double x);

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records);
/// All nodes, boundary rows included (zeros).
void write_state_csv(std::ostream& os, const Grid& grid, const BeamState& state);

/// Throws InvalidArgument naming the file and line on schema violations.
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

/// Reads an x,u,v,theta file whose rows match the grid nodes and whose
/// boundary rows are zero.
BeamState read_state_csv(const std::filesystem::path& path, const Grid& grid);

/// Writes through a temporary sibling file and renames it into place, so the
/// target either keeps its old content or holds the complete new content.
void write_file_atomically(const std::filesystem::path& target, const std::function<void(std::ostream&)>& writer);

}  // namespace thermobeam
