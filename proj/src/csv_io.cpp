#include "thermobeam/csv_io.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unistd.h>

namespace thermobeam {

std::string format_value(double x) { return fmt::format("{:.16e}", x); }

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records) {
    os << kDiagnosticsHeader << '\n';
    for (const auto& r : records) {
        os << format_value(r.t) << ',' << format_value(r.energy) << ',' << format_value(r.dissipation) << ','
           << format_value(r.balance_residual) << ',' << format_value(r.f1) << ',' << format_value(r.lyapunov_g)
           << '\n';
    }
}

void write_state_csv(std::ostream& os, const Grid& grid, const BeamState& s) {
    os << kStateHeader << '\n';
    const std::size_t m = grid.n_interior();
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
        const bool boundary = i == 0 || i == m + 1;
        const double u = boundary ? 0.0 : s.u[i - 1];
        const double v = boundary ? 0.0 : s.v[i - 1];
        const double theta = boundary ? 0.0 : s.theta[i - 1];
        os << format_value(grid.node(i)) << ',' << format_value(u) << ',' << format_value(v) << ','
           << format_value(theta) << '\n';
    }
}

namespace {

std::vector<double> split_numbers(const std::string& line, std::size_t expected, const std::filesystem::path& path,
                                  std::size_t line_no) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto field = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                            : comma - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
            throw InvalidArgument(fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, field));
        }
        out.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != expected) {
        throw InvalidArgument(
            fmt::format("{}:{}: expected {} columns, got {}", path.string(), line_no, expected, out.size()));
    }
    return out;
}

std::ifstream open_with_header(const std::filesystem::path& path, const char* header) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument(fmt::format("cannot read '{}'", path.string()));
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first != header) {
        throw InvalidArgument(
            fmt::format("{}:1: header '{}' does not match expected '{}'", path.string(), first, header));
    }
    return in;
}

}  // namespace

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
    auto in = open_with_header(path, kDiagnosticsHeader);
    std::vector<DiagnosticsRecord> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto v = split_numbers(line, 6, path, line_no);
        out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    if (out.empty()) throw InvalidArgument(fmt::format("{}: no data rows", path.string()));
    return out;
}

BeamState read_state_csv(const std::filesystem::path& path, const Grid& grid) {
    auto in = open_with_header(path, kStateHeader);
    BeamState s = BeamState::zeros(grid.n_interior());
    std::string line;
    std::size_t line_no = 1;
    std::size_t node = 0;
    const double tol = 1e-9 * grid.length();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto v = split_numbers(line, 4, path, line_no);
        if (node >= grid.n_nodes()) {
            throw InvalidArgument(fmt::format("{}:{}: more rows than the {} grid nodes", path.string(), line_no,
                                              grid.n_nodes()));
        }
        if (std::abs(v[0] - grid.node(node)) > tol) {
            throw InvalidArgument(fmt::format("{}:{}: x = {} does not match grid node {} at {}", path.string(),
                                              line_no, v[0], node, grid.node(node)));
        }
        const bool boundary = node == 0 || node == grid.n_cells();
        if (boundary) {
            if (v[1] != 0.0 || v[2] != 0.0 || v[3] != 0.0) {
                throw InvalidArgument(fmt::format("{}:{}: boundary values must be zero (clamped beam, Dirichlet "
                                                  "temperature)",
                                                  path.string(), line_no));
            }
        } else {
            s.u[node - 1] = v[1];
            s.v[node - 1] = v[2];
            s.theta[node - 1] = v[3];
        }
        ++node;
    }
    if (node != grid.n_nodes()) {
        throw InvalidArgument(
            fmt::format("{}: {} rows for a grid of {} nodes", path.string(), node, grid.n_nodes()));
    }
    return s;
}

void write_file_atomically(const std::filesystem::path& target, const std::function<void(std::ostream&)>& writer) {
    auto tmp = target;
    tmp += fmt::format(".tmp.{}", ::getpid());
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(fmt::format("cannot open '{}' for writing", tmp.string()));
            writer(out);
            out.flush();
            if (!out) throw Error(fmt::format("write to '{}' failed", tmp.string()));
        }
        std::filesystem::rename(tmp, target);
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw;
    }
}

}  // namespace thermobeam
