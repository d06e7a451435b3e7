#include "test_support.hpp"

#include "thermobeam/diagnostics.hpp"
#include "thermobeam/errors.hpp"
#include "thermobeam/operators.hpp"
#include "thermobeam/random_state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace thermobeam;
using std::numbers::pi;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

BeamState only(std::size_t field, std::vector<double> values) {
    BeamState s = BeamState::zeros(values.size());
    (field == 0 ? s.u : field == 1 ? s.v : s.theta) = std::move(values);
    return s;
}

std::vector<double> sampled(const Grid& g, double (*f)(double)) {
    std::vector<double> out(g.n_interior());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(g.interior_node(k));
    return out;
}

double sin_pi(double x) { return std::sin(pi * x); }
double sin_sq(double x) { return std::sin(pi * x) * std::sin(pi * x); }

}  // namespace

TEST(D2, FourCellValues) {
    const auto d2 = assemble_d2(build_grid(1.0, 4));
    ASSERT_EQ(d2.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d2(i, i), -32.0);
    EXPECT_EQ(d2(0, 1), 16.0);
    EXPECT_EQ(d2(1, 0), 16.0);
    EXPECT_EQ(d2(2, 1), 16.0);
    EXPECT_EQ(d2(0, 2), 0.0);
}

TEST(D2, ZeroMapsToZero) {
    const auto d2 = assemble_d2(build_grid(1.0, 16));
    for (double y : d2 * std::vector<double>(15, 0.0)) EXPECT_EQ(y, 0.0);
}

TEST(D2, SecondOrderOnSine) {
    std::vector<double> errs;
    for (std::size_t n : {32u, 64u, 128u}) {
        const auto g = build_grid(1.0, n);
        const auto y = assemble_d2(g) * sampled(g, sin_pi);
        double err = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k)
            err = std::max(err, std::abs(y[k] + pi * pi * sin_pi(g.interior_node(k))));
        errs.push_back(err);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        EXPECT_GT(order, 1.9);
        EXPECT_LT(order, 2.1);
    }
}

TEST(D2, NegativeDefinite) {
    const Eigen::MatrixXd d = tbtest::dense(assemble_d2(build_grid(1.0, 40)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
    EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
}

TEST(Biharmonic, UnitRigidityStencil) {
    const auto g = build_grid(1.0, 20);
    const auto one = CoefficientFunction::constant(1.0);
    const auto b = assemble_biharmonic(g, sample_coefficients(g, one, one, 1.0, 1.0));
    const double s = std::pow(g.h(), -4);
    for (std::size_t k = 2; k + 2 < b.size(); ++k) {
        EXPECT_NEAR(b(k, k - 2) / s, 1.0, 1e-12);
        EXPECT_NEAR(b(k, k - 1) / s, -4.0, 1e-12);
        EXPECT_NEAR(b(k, k) / s, 6.0, 1e-12);
        EXPECT_NEAR(b(k, k + 1) / s, -4.0, 1e-12);
        EXPECT_NEAR(b(k, k + 2) / s, 1.0, 1e-12);
    }
    // clamped end: the ghost reflection adds one to the first diagonal entry
    EXPECT_NEAR(b(0, 0) / s, 7.0, 1e-12);
    EXPECT_NEAR(b(0, 1) / s, -4.0, 1e-12);
    EXPECT_NEAR(b(0, 2) / s, 1.0, 1e-12);
    EXPECT_NEAR(b(b.size() - 1, b.size() - 1) / s, 7.0, 1e-12);
}

TEST(Biharmonic, ExactlySymmetricForVariableRigidity) {
    const auto op = tbtest::variable_operator(64);
    EXPECT_EQ(op.biharmonic().max_asymmetry(), 0.0);
    EXPECT_EQ(op.biharmonic().lower(), 2u);
    EXPECT_EQ(op.biharmonic().upper(), 2u);
}

TEST(Biharmonic, MatchesWeightedNormalEquations) {
    for (std::size_t n : {8u, 33u, 64u}) {
        const auto op = tbtest::variable_operator(n);
        const double h = op.grid().h();
        const Eigen::MatrixXd g = tbtest::ghost_second_derivative(n, h);
        Eigen::VectorXd wp(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 0.5 * h : h;
            wp(static_cast<long>(i)) = w * op.coeffs().p[i];
        }
        const Eigen::MatrixXd ref = g.transpose() * wp.asDiagonal() * g / h;
        const Eigen::MatrixXd got = tbtest::dense(op.biharmonic());
        EXPECT_LT(max_abs(got - ref), 1e-12 * max_abs(ref)) << "n = " << n;
    }
}

TEST(Biharmonic, PositiveDefinite) {
    const auto op = tbtest::variable_operator(50);
    Eigen::LLT<Eigen::MatrixXd> llt(tbtest::dense(op.biharmonic()));
    EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST(Biharmonic, SecondOrderOnSmoothClampedProfile) {
    // sin^2(pi x) has zero value and slope at both ends.
    // With p = 1 + x/2: (p f'')'' = 2 p' f''' + p f''''.
    auto exact = [](double x) {
        const double w = 2.0 * pi;
        const double f3 = -0.5 * w * w * w * std::sin(w * x);
        const double f4 = -0.5 * w * w * w * w * std::cos(w * x);
        return f3 + (1.0 + 0.5 * x) * f4;
    };
    std::vector<double> errs;
    for (std::size_t n : {32u, 64u, 128u}) {
        const auto g = build_grid(1.0, n);
        const auto c = sample_coefficients(g, CoefficientFunction::affine(1.0, 0.5), CoefficientFunction::constant(1.0), 1.0, 1.0);
        const auto y = assemble_biharmonic(g, c) * sampled(g, sin_sq);
        double err = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double x = g.interior_node(k);
            if (x < 0.25 || x > 0.75) continue;
            err = std::max(err, std::abs(y[k] - exact(x)));
        }
        errs.push_back(err);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        EXPECT_GT(order, 1.7);
        EXPECT_LT(order, 2.3);
    }
}

TEST(Biharmonic, ClampedEigenvalueConverges) {
    const double beta = tbtest::clamped_beta1();
    EXPECT_NEAR(beta, 4.730040744862704, 1e-12);
    const double exact = std::pow(beta, 4);
    double previous = 1.0;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const auto g = build_grid(1.0, n);
        const auto zero = CoefficientFunction::constant(0.0);
        const auto c = sample_coefficients(g, CoefficientFunction::constant(1.0), zero, 0.0, 1.0, PositivityMode::analysis);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tbtest::dense(assemble_biharmonic(g, c)), Eigen::EigenvaluesOnly);
        const double rel = std::abs(es.eigenvalues()(0) - exact) / exact;
        EXPECT_LT(rel, previous) << "n = " << n;
        previous = rel;
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(Generator, ZeroMapsToZero) {
    const auto op = tbtest::variable_operator(16);
    const auto a = op.apply(BeamState::zeros(op.n_interior()));
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        EXPECT_EQ(a.u[i], 0.0);
        EXPECT_EQ(a.v[i], 0.0);
        EXPECT_EQ(a.theta[i], 0.0);
    }
}

TEST(Generator, BlockColumns) {
    const auto op = tbtest::variable_operator(16);
    const std::size_t m = op.n_interior();
    StateSampler rng(3);
    const auto x = rng.state(m).u;
    const auto bx = op.biharmonic() * x;
    const auto dx = op.d2() * x;
    const auto q = op.q_interior();

    const auto au = op.apply(only(0, x));
    const auto av = op.apply(only(1, x));
    const auto at = op.apply(only(2, x));
    for (std::size_t i = 0; i < m; ++i) {
        EXPECT_EQ(au.u[i], 0.0);
        EXPECT_NEAR(au.v[i], -bx[i], 1e-9 * std::abs(bx[i]) + 1e-9);
        EXPECT_EQ(au.theta[i], 0.0);

        EXPECT_EQ(av.u[i], x[i]);
        EXPECT_NEAR(av.v[i], -2.0 * q[i] * x[i], 1e-13);
        EXPECT_NEAR(av.theta[i], op.kappa() * dx[i], 1e-10);

        EXPECT_EQ(at.u[i], 0.0);
        EXPECT_NEAR(at.v[i], -op.kappa() * dx[i], 1e-10);
        EXPECT_NEAR(at.theta[i], op.eta() * dx[i], 1e-10);
    }
}

TEST(Generator, DissipativityIdentityOnRandomStates) {
    for (auto make : {&tbtest::constant_operator, &tbtest::variable_operator}) {
        for (std::size_t n : {32u, 64u}) {
            const auto op = make(n, 1.0);
            const double h = op.grid().h();
            const auto q = op.q_interior();
            StateSampler rng(n);
            for (int s = 0; s < 50; ++s) {
                const auto u = rng.state(op.n_interior());
                double damping = 0.0;
                for (std::size_t i = 0; i < u.v.size(); ++i) damping += h * q[i] * u.v[i] * u.v[i];
                double grad = 0.0;
                std::vector<double> th(u.theta);
                th.insert(th.begin(), 0.0);
                th.push_back(0.0);
                for (std::size_t e = 0; e + 1 < th.size(); ++e) grad += (th[e + 1] - th[e]) * (th[e + 1] - th[e]) / h;
                const double form = inner_product(op.apply(u), u, op);
                const double scale = std::max(inner_product(u, u, op), 1.0);
                EXPECT_LT(std::abs(form + 2.0 * damping + op.eta() * grad) / scale, 1e-11);
                EXPECT_LE(form, 1e-10 * scale);
            }
        }
    }
}

TEST(InnerProduct, SymmetricAndTwiceEnergy) {
    const auto op = tbtest::variable_operator(40);
    StateSampler rng(9);
    for (int s = 0; s < 20; ++s) {
        const auto a = rng.state(op.n_interior());
        const auto b = rng.state(op.n_interior());
        EXPECT_EQ(inner_product(a, b, op), inner_product(b, a, op));
        const double e = energy(a, op);
        EXPECT_NEAR(inner_product(a, a, op), 2.0 * e, 1e-14 * e);
    }
    const auto z = BeamState::zeros(op.n_interior());
    EXPECT_EQ(inner_product(z, z, op), 0.0);
}

TEST(Quadrature, SineSquaredIntegratesExactly) {
    const double length = 2.0;
    const auto op = tbtest::constant_operator(40, length);
    const auto w = op.node_weights();
    for (int k = 1; k < 40; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double s = std::sin(k * pi * op.grid().node(i) / length);
            sum += w[i] * s * s;
        }
        EXPECT_NEAR(sum, 0.5 * length, 1e-13) << "k = " << k;
    }
}

TEST(Quadrature, QuadraticHasTrapezoidError) {
    const double length = 1.5;
    const double c = 3.0;
    const auto op = tbtest::constant_operator(30, length);
    const auto w = op.node_weights();
    const double h = op.grid().h();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = op.grid().node(i);
        sum += w[i] * c * x * (length - x);
    }
    const double integral = c * length * length * length / 6.0;
    EXPECT_NEAR(sum, integral - c * length * h * h / 6.0, 1e-13);
}

TEST(Interleaved, PackUnpackRoundTrip) {
    StateSampler rng(5);
    auto s = rng.state(7);
    s.t = 0.25;
    const auto packed = pack_interleaved(s);
    ASSERT_EQ(packed.size(), 21u);
    EXPECT_EQ(packed[interleaved(3, 0)], s.u[3]);
    EXPECT_EQ(packed[interleaved(3, 1)], s.v[3]);
    EXPECT_EQ(packed[interleaved(3, 2)], s.theta[3]);
    const auto back = unpack_interleaved(packed, 0.25);
    EXPECT_EQ(back.u, s.u);
    EXPECT_EQ(back.v, s.v);
    EXPECT_EQ(back.theta, s.theta);
    EXPECT_EQ(back.t, 0.25);
}

TEST(Interleaved, ShiftedGeneratorMatchesBlockApply) {
    const auto op = tbtest::variable_operator(24);
    const double shift = 1.0;
    const double scale = -0.0125;
    const auto m = assemble_shifted_generator(op, shift, scale);
    EXPECT_EQ(m.lower(), 7u);
    EXPECT_EQ(m.upper(), 5u);
    StateSampler rng(2);
    const auto s = rng.state(op.n_interior());
    const auto got = m * pack_interleaved(s);
    const auto ref = pack_interleaved(shift * s + scale * op.apply(s));
    double norm = 0.0;
    for (double r : ref) norm = std::max(norm, std::abs(r));
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-13 * norm);
}

TEST(Generator, RejectsStateOfWrongSize) {
    const auto op = tbtest::constant_operator(10);
    EXPECT_THROW(op.apply(BeamState::zeros(5)), DimensionError);
    auto s = BeamState::zeros(op.n_interior());
    s.theta.pop_back();
    EXPECT_THROW(op.apply(s), DimensionError);
}

TEST(Generator, OperatorDumpHasBothBlocks) {
    const auto op = tbtest::constant_operator(8);
    std::ostringstream os;
    write_operator_dump(op, os);
    EXPECT_NE(os.str().find("# D2 7 1 1"), std::string::npos);
    EXPECT_NE(os.str().find("# B 7 2 2"), std::string::npos);
}
