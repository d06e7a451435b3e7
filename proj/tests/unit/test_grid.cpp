#include "thermobeam/errors.hpp"
#include "thermobeam/grid.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace thermobeam;

TEST(Grid, SmallestGrid) {
    const auto g = build_grid(1.0, 4);
    EXPECT_EQ(g.n_nodes(), 5u);
    EXPECT_EQ(g.n_interior(), 3u);
    EXPECT_DOUBLE_EQ(g.h(), 0.25);
    EXPECT_EQ(g.nodes(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
    EXPECT_DOUBLE_EQ(g.interior_node(0), 0.25);
}

TEST(Grid, SpacingForLengthTwo) {
    const auto g = build_grid(2.0, 200);
    EXPECT_NEAR(g.h(), 0.01, 1e-15);
    EXPECT_EQ(g.node(200), 2.0);
}

TEST(Grid, RejectsTooFewCells) {
    EXPECT_THROW(build_grid(1.0, 3), InvalidArgument);
    EXPECT_THROW(build_grid(1.0, 0), InvalidArgument);
}

TEST(Grid, RejectsBadLength) {
    EXPECT_THROW(build_grid(0.0, 10), InvalidArgument);
    EXPECT_THROW(build_grid(-1.0, 10), InvalidArgument);
    EXPECT_THROW(build_grid(std::nan(""), 10), InvalidArgument);
}

TEST(Grid, CellsTimesSpacingIsLength) {
    for (double length : {0.3, 1.0, 2.0, 7.25, 13.0}) {
        for (std::size_t n : {4u, 7u, 33u, 400u, 1023u}) {
            const auto g = build_grid(length, n);
            EXPECT_NEAR(g.h() * static_cast<double>(n), length, 4.0 * std::numeric_limits<double>::epsilon() * length);
            EXPECT_EQ(g.nodes().front(), 0.0);
            EXPECT_EQ(g.nodes().back(), length);
            for (std::size_t i = 1; i < g.n_nodes(); ++i) EXPECT_GT(g.node(i), g.node(i - 1));
        }
    }
}

TEST(Coefficients, ConstantGivesEqualBounds) {
    const auto g = build_grid(1.0, 50);
    const auto one = CoefficientFunction::constant(1.0);
    const auto c = sample_coefficients(g, one, one, 1.0, 1.0);
    EXPECT_EQ(c.alpha1, 1.0);
    EXPECT_EQ(c.alpha2, 1.0);
    EXPECT_EQ(c.alpha3, 1.0);
    EXPECT_EQ(c.alpha4, 1.0);
    EXPECT_EQ(c.p.size(), g.n_nodes());
}

TEST(Coefficients, SinBumpBounds) {
    // 2 + sin(2 pi x) on 100 cells hits x = 1/4 and 3/4 exactly.
    const auto g = build_grid(1.0, 100);
    const auto p = CoefficientFunction::sin_bump(2.0, 1.0, 1.0);
    const auto c = sample_coefficients(g, p, CoefficientFunction::constant(1.0), 1.0, 1.0);
    double lo = 1e300;
    double hi = -1e300;
    for (double x : g.nodes()) {
        lo = std::min(lo, 2.0 + std::sin(2.0 * std::numbers::pi * x));
        hi = std::max(hi, 2.0 + std::sin(2.0 * std::numbers::pi * x));
    }
    EXPECT_EQ(c.alpha1, lo);
    EXPECT_EQ(c.alpha2, hi);
    EXPECT_GE(c.alpha1, 1.0 - 1e-15);
    EXPECT_LE(c.alpha2, 3.0 + 1e-15);
}

TEST(Coefficients, NegativeDampingNamesTheNode) {
    const auto g = build_grid(1.0, 10);
    try {
        sample_coefficients(g, CoefficientFunction::constant(1.0), CoefficientFunction::affine(-0.5, 1.0), 1.0, 1.0);
        FAIL() << "expected CoefficientPositivityError";
    } catch (const CoefficientPositivityError& e) {
        EXPECT_EQ(e.node(), 0u);
        EXPECT_NE(std::string(e.what()).find("coefficient q"), std::string::npos);
    }
}

TEST(Coefficients, NonPositiveRigidityRejected) {
    const auto g = build_grid(1.0, 10);
    EXPECT_THROW(sample_coefficients(g, CoefficientFunction::affine(1.0, -2.0), CoefficientFunction::constant(1.0), 1.0, 1.0),
                 CoefficientPositivityError);
}

TEST(Coefficients, StrictModeRejectsZeroCouplingAndDamping) {
    const auto g = build_grid(1.0, 10);
    const auto one = CoefficientFunction::constant(1.0);
    const auto zero = CoefficientFunction::constant(0.0);
    EXPECT_THROW(sample_coefficients(g, one, one, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(sample_coefficients(g, one, zero, 1.0, 1.0), CoefficientPositivityError);
    EXPECT_THROW(sample_coefficients(g, one, one, 1.0, 0.0), InvalidArgument);
}

TEST(Coefficients, AnalysisModeAdmitsZeroCouplingAndDamping) {
    const auto g = build_grid(1.0, 10);
    const auto one = CoefficientFunction::constant(1.0);
    const auto zero = CoefficientFunction::constant(0.0);
    const auto c = sample_coefficients(g, one, zero, 0.0, 1.0, PositivityMode::analysis);
    EXPECT_EQ(c.kappa, 0.0);
    EXPECT_EQ(c.alpha4, 0.0);
    EXPECT_THROW(sample_coefficients(g, one, one, -1.0, 1.0, PositivityMode::analysis), InvalidArgument);
    EXPECT_THROW(sample_coefficients(g, one, one, 1.0, 0.0, PositivityMode::analysis), InvalidArgument);
}

TEST(CoefficientFunction, ParseCatalog) {
    EXPECT_EQ(CoefficientFunction::parse("constant(2.5)"), CoefficientFunction::constant(2.5));
    EXPECT_EQ(CoefficientFunction::parse(" affine( 1, 0.5 ) "), CoefficientFunction::affine(1.0, 0.5));
    EXPECT_EQ(CoefficientFunction::parse("sin_bump(2,1,3)"), CoefficientFunction::sin_bump(2.0, 1.0, 3.0));
}

TEST(CoefficientFunction, ParseErrors) {
    EXPECT_THROW(CoefficientFunction::parse("cubic(1)"), InvalidArgument);
    EXPECT_THROW(CoefficientFunction::parse("affine(1)"), InvalidArgument);
    EXPECT_THROW(CoefficientFunction::parse("constant(x)"), InvalidArgument);
    EXPECT_THROW(CoefficientFunction::parse("constant 1"), InvalidArgument);
}

TEST(CoefficientFunction, ToStringRoundTrips) {
    for (const auto& f : {CoefficientFunction::constant(0.125), CoefficientFunction::affine(1.0, -0.25),
                          CoefficientFunction::sin_bump(3.0, 0.5, 2.0)}) {
        EXPECT_EQ(CoefficientFunction::parse(f.to_string()), f);
    }
}

TEST(CoefficientFunction, DerivativesMatchFiniteDifferences) {
    const auto f = CoefficientFunction::sin_bump(2.0, 0.7, 1.5);
    const double d = 1e-4;
    for (double x : {0.1, 0.37, 0.8}) {
        const double fd1 = (f(x + d) - f(x - d)) / (2.0 * d);
        const double fd2 = (f(x + d) - 2.0 * f(x) + f(x - d)) / (d * d);
        EXPECT_NEAR(f.derivative(x, 1), fd1, 1e-6);
        EXPECT_NEAR(f.derivative(x, 2), fd2, 1e-4);
    }
    const auto a = CoefficientFunction::affine(1.0, 3.0);
    EXPECT_EQ(a.derivative(0.4, 1), 3.0);
    EXPECT_EQ(a.derivative(0.4, 2), 0.0);
}
