#include "test_support.hpp"

#include "thermobeam/csv_io.hpp"
#include "thermobeam/errors.hpp"
#include "thermobeam/random_state.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace thermobeam;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST(Csv, ValueFormatRoundTrips) {
    EXPECT_EQ(format_value(1.0), "1.0000000000000000e+00");
    EXPECT_EQ(std::stod(format_value(0.1)), 0.1);
    EXPECT_EQ(std::stod(format_value(-2.5066282746310002e-3)), -2.5066282746310002e-3);
}

TEST(Csv, DiagnosticsHeaderAndRoundTrip) {
    std::vector<DiagnosticsRecord> recs(3);
    for (std::size_t k = 0; k < recs.size(); ++k) {
        recs[k].t = 0.1 * static_cast<double>(k);
        recs[k].energy = 1.0 / (1.0 + static_cast<double>(k));
        recs[k].dissipation = -0.3;
        recs[k].balance_residual = 1e-17;
        recs[k].f1 = 0.01;
        recs[k].lyapunov_g = 0.9;
    }
    const auto dir = tbtest::scratch_dir("csv");
    const auto path = dir / "d.csv";
    write_file_atomically(path, [&](std::ostream& os) { write_diagnostics_csv(os, recs); });
    const auto text = slurp(path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,energy,dissipation,balance_residual,f1,lyapunov_g");
    const auto back = read_diagnostics_csv(path);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) {
        EXPECT_EQ(back[k].t, recs[k].t);
        EXPECT_EQ(back[k].energy, recs[k].energy);
        EXPECT_EQ(back[k].lyapunov_g, recs[k].lyapunov_g);
    }
    std::filesystem::remove_all(dir);
}

TEST(Csv, DiagnosticsSchemaViolations) {
    const auto dir = tbtest::scratch_dir("csv_bad");
    std::ofstream(dir / "swapped.csv") << "energy,t,dissipation,balance_residual,f1,lyapunov_g\n1,0,0,0,0,0\n";
    std::ofstream(dir / "short.csv") << kDiagnosticsHeader << "\n0,1,0,0,0\n";
    std::ofstream(dir / "text.csv") << kDiagnosticsHeader << "\n0,1,0,0,0,0\n0.1,abc,0,0,0,0\n";
    std::ofstream(dir / "empty.csv") << kDiagnosticsHeader << "\n";
    EXPECT_THROW(read_diagnostics_csv(dir / "swapped.csv"), InvalidArgument);
    EXPECT_THROW(read_diagnostics_csv(dir / "short.csv"), InvalidArgument);
    try {
        read_diagnostics_csv(dir / "text.csv");
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("text.csv:3"), std::string::npos);
    }
    EXPECT_THROW(read_diagnostics_csv(dir / "empty.csv"), InvalidArgument);
    EXPECT_THROW(read_diagnostics_csv(dir / "missing.csv"), InvalidArgument);
    std::filesystem::remove_all(dir);
}

TEST(Csv, StateRoundTripIncludesBoundaryRows) {
    const auto grid = build_grid(1.0, 12);
    StateSampler rng(2);
    const auto s = rng.state(grid.n_interior());
    const auto dir = tbtest::scratch_dir("state");
    const auto path = dir / "s.csv";
    write_file_atomically(path, [&](std::ostream& os) { write_state_csv(os, grid, s); });
    const auto text = slurp(path);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 14);
    EXPECT_EQ(text.substr(0, text.find('\n')), "x,u,v,theta");
    const auto back = read_state_csv(path, grid);
    EXPECT_EQ(back.u, s.u);
    EXPECT_EQ(back.v, s.v);
    EXPECT_EQ(back.theta, s.theta);
    EXPECT_THROW(read_state_csv(path, build_grid(1.0, 10)), InvalidArgument);
    std::filesystem::remove_all(dir);
}

TEST(Csv, StateRejectsNonzeroBoundary) {
    const auto grid = build_grid(1.0, 4);
    const auto dir = tbtest::scratch_dir("state_bad");
    std::ofstream(dir / "b.csv") << "x,u,v,theta\n0,0,0,0.5\n0.25,1,0,0\n0.5,1,0,0\n0.75,1,0,0\n1,0,0,0\n";
    EXPECT_THROW(read_state_csv(dir / "b.csv", grid), InvalidArgument);
    std::filesystem::remove_all(dir);
}

TEST(Csv, AtomicWriteKeepsOldContentOnFailure) {
    const auto dir = tbtest::scratch_dir("atomic");
    const auto path = dir / "out.csv";
    write_file_atomically(path, [](std::ostream& os) { os << "old\n"; });
    EXPECT_THROW(write_file_atomically(path,
                                       [](std::ostream& os) {
                                           os << "partial";
                                           throw std::runtime_error("interrupted");
                                       }),
                 std::runtime_error);
    EXPECT_EQ(slurp(path), "old\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    EXPECT_EQ(files, 1u);
    std::filesystem::remove_all(dir);
}
