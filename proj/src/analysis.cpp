#include "thermobeam/analysis.hpp"

#include "thermobeam/diagnostics.hpp"
#include "thermobeam/errors.hpp"
#include "thermobeam/random_state.hpp"
#include "thermobeam/timestepper.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace thermobeam {

DissipativityReport dissipativity_certificate(const BlockOperator& op, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) {
        throw InvalidArgument("dissipativity certificate needs at least one sample");
    }
    StateSampler sampler(seed);
    DissipativityReport report;
    report.n_samples = n_samples;
    report.seed = seed;
    report.max_form = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n_samples; ++s) {
        const auto state = sampler.state(op.n_interior());
        const double form = inner_product(op.apply(state), state, op);
        const double expected = dissipation(state, op);
        const double scale = std::max(inner_product(state, state, op), 1.0);
        report.max_defect = std::max(report.max_defect, std::abs(form - expected) / scale);
        report.max_form = std::max(report.max_form, form / scale);
    }
    return report;
}

ZeroResolvent::ZeroResolvent(const BlockOperator& op) : op_(&op), d2_lu_(op.d2()), b_lu_(op.biharmonic()) {}

BeamState ZeroResolvent::solve(const BeamState& rhs) const {
    const auto& op = *op_;
    op.check(rhs);
    if (!rhs.finite()) {
        throw StateCorruptionError("resolvent right-hand side contains non-finite values");
    }
    const std::size_t m = op.n_interior();
    BeamState out = BeamState::zeros(m, rhs.t);

    // v = f
    out.v = rhs.u;

    // eta D2 theta = h - kappa D2 f
    const auto d2f = op.d2() * rhs.u;
    std::vector<double> theta_xx(m);
    for (std::size_t i = 0; i < m; ++i) theta_xx[i] = (rhs.theta[i] - op.kappa() * d2f[i]) / op.eta();
    out.theta = d2_lu_.solve(theta_xx);

    // B u = -g - 2 q f - kappa theta_xx
    const auto q = op.q_interior();
    std::vector<double> load(m);
    for (std::size_t i = 0; i < m; ++i) {
        load[i] = -rhs.v[i] - 2.0 * q[i] * rhs.u[i] - op.kappa() * theta_xx[i];
    }
    out.u = b_lu_.solve(load);
    return out;
}

std::pair<BeamState, ResolventReport> resolve_at_zero(const BlockOperator& op, const BeamState& rhs) {
    const ZeroResolvent resolvent(op);
    BeamState u = resolvent.solve(rhs);
    ResolventReport report;
    const double rhs_norm = std::sqrt(inner_product(rhs, rhs, op));
    if (rhs_norm == 0.0) {
        report.success = true;
        return {std::move(u), report};
    }
    const auto residual = op.apply(u) - rhs;
    report.residual_norm = std::sqrt(inner_product(residual, residual, op)) / rhs_norm;
    report.stability_ratio = std::sqrt(inner_product(u, u, op)) / rhs_norm;
    report.success = report.residual_norm < kResolventTolerance;
    return {std::move(u), report};
}

std::string to_string(SpectrumMethod method) {
    return method == SpectrumMethod::dense ? "dense" : "shifted-power";
}

namespace {

using Eigen::MatrixXd;

MatrixXd dense(const BandedMatrix& a) {
    MatrixXd out = MatrixXd::Zero(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j0 = i > a.lower() ? i - a.lower() : 0;
        const std::size_t j1 = std::min(a.size() - 1, i + a.upper());
        for (std::size_t j = j0; j <= j1; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
        }
    }
    return out;
}

void sort_by_real_part(std::vector<std::complex<double>>& eigs) {
    std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
}

SpectrumReport dense_spectrum(const BlockOperator& op, SpectrumScope scope) {
    if (op.grid().n_cells() > kDenseMaxCells) {
        throw CapacityError(fmt::format("dense spectrum is limited to n_cells <= {} (got {}); use the shifted-power "
                                        "method instead",
                                        kDenseMaxCells, op.grid().n_cells()));
    }
    const auto m = static_cast<Eigen::Index>(op.n_interior());
    const double h = op.grid().h();
    const double sqrt_h = std::sqrt(h);

    // h B = L L^T; in coordinates (L^T u, sqrt(h) v, sqrt(h) theta) the
    // displacement-velocity coupling is the skew pair (L^T / sqrt(h), -L / sqrt(h)).
    const MatrixXd gram = h * dense(op.biharmonic());
    const Eigen::LLT<MatrixXd> chol(gram);
    if (chol.info() != Eigen::Success) {
        throw SingularSystemError("bending Gram matrix is not positive definite");
    }
    const MatrixXd coupling = MatrixXd(chol.matrixL()).transpose() / sqrt_h;

    const Eigen::Index blocks = scope == SpectrumScope::full ? 3 : 2;
    MatrixXd a = MatrixXd::Zero(blocks * m, blocks * m);
    a.block(0, m, m, m) = coupling;
    a.block(m, 0, m, m) = -coupling.transpose();
    const auto q = op.q_interior();
    for (Eigen::Index i = 0; i < m; ++i) a(m + i, m + i) = -2.0 * q[static_cast<std::size_t>(i)];
    if (scope == SpectrumScope::full) {
        const MatrixXd d2 = dense(op.d2());
        a.block(m, 2 * m, m, m) = -op.kappa() * d2;
        a.block(2 * m, m, m, m) = op.kappa() * d2;
        a.block(2 * m, 2 * m, m, m) = op.eta() * d2;
    }

    const Eigen::EigenSolver<MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw Error("dense eigensolver did not converge");
    }
    SpectrumReport report;
    report.method = SpectrumMethod::dense;
    const auto& values = solver.eigenvalues();
    report.eigenvalues.assign(values.begin(), values.end());
    sort_by_real_part(report.eigenvalues);
    report.n_eigs = report.eigenvalues.size();
    report.abscissa = report.eigenvalues.front().real();
    return report;
}

void h_orthonormalize(std::vector<BeamState>& basis, const BlockOperator& op) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const double c = inner_product(basis[j], basis[i], op);
                basis[j] += -c * basis[i];
            }
        }
        const double norm = std::sqrt(inner_product(basis[j], basis[j], op));
        if (!(norm > 0.0)) {
            throw Error("shifted-power basis collapsed; use a smaller block size");
        }
        basis[j] *= 1.0 / norm;
    }
}

SpectrumReport power_spectrum(const BlockOperator& op, SpectrumScope scope, const ShiftedPowerOptions& opts) {
    if (scope != SpectrumScope::full) {
        throw InvalidArgument("shifted-power method only supports the full operator");
    }
    const std::size_t k = opts.block_size;
    if (k < 2 || k > 3 * op.n_interior()) {
        throw InvalidArgument(fmt::format("block size {} out of range", k));
    }
    const ZeroResolvent resolvent(op);
    StateSampler sampler(opts.seed);
    // Extra guard vectors let the k wanted Ritz values converge even when
    // the k-th and (k+1)-th eigenvalues have nearly equal modulus.
    const std::size_t width = std::min(k + 4, 3 * op.n_interior());
    std::vector<BeamState> basis;
    for (std::size_t j = 0; j < width; ++j) basis.push_back(sampler.state(op.n_interior()));
    h_orthonormalize(basis, op);

    auto nearest_origin = [k](std::vector<std::complex<double>> values) {
        std::stable_sort(values.begin(), values.end(),
                         [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
        std::size_t keep = std::min(k, values.size());
        if (keep < values.size() && values[keep - 1].imag() != 0.0 &&
            std::abs(values[keep - 1] - std::conj(values[keep])) <= 1e-8 * std::abs(values[keep])) {
            ++keep;  // do not split a conjugate pair
        }
        values.resize(keep);
        sort_by_real_part(values);
        return values;
    };

    std::vector<std::complex<double>> ritz;
    std::vector<std::complex<double>> previous;
    const auto w = static_cast<Eigen::Index>(width);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        for (auto& b : basis) b = resolvent.solve(b);
        h_orthonormalize(basis, op);

        MatrixXd t(w, w);
        for (std::size_t j = 0; j < width; ++j) {
            const auto ab = op.apply(basis[j]);
            for (std::size_t i = 0; i < width; ++i) {
                t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner_product(ab, basis[i], op);
            }
        }
        const Eigen::EigenSolver<MatrixXd> small(t, false);
        ritz = nearest_origin({small.eigenvalues().begin(), small.eigenvalues().end()});
        if (previous.size() == ritz.size()) {
            double change = 0.0;
            double scale = 0.0;
            for (std::size_t i = 0; i < ritz.size(); ++i) {
                change = std::max(change, std::abs(ritz[i] - previous[i]));
                scale = std::max(scale, std::abs(ritz[i]));
            }
            if (change <= opts.tolerance * scale) break;
        }
        previous = ritz;
    }
    SpectrumReport report;
    report.method = SpectrumMethod::shifted_power;
    report.eigenvalues = ritz;
    report.n_eigs = ritz.size();
    report.abscissa = ritz.front().real();
    return report;
}

}  // namespace

SpectrumReport spectral_abscissa(const BlockOperator& op, SpectrumMethod method, SpectrumScope scope,
                                 const ShiftedPowerOptions& power) {
    return method == SpectrumMethod::dense ? dense_spectrum(op, scope) : power_spectrum(op, scope, power);
}

// ---------------------------------------------------------------------------

namespace {

struct ExactProfiles {
    double s;       // sin^2(k x)
    double s_xx;
    double s_xxx;
    double s_xxxx;
    double sine;    // sin(k x)
};

ExactProfiles profiles(double x, double length) {
    const double k = std::numbers::pi / length;
    const double sk = std::sin(k * x);
    return {sk * sk, 2.0 * k * k * std::cos(2.0 * k * x), -4.0 * k * k * k * std::sin(2.0 * k * x),
            -8.0 * k * k * k * k * std::cos(2.0 * k * x), sk};
}

/// Source terms for the velocity and temperature equations at time t.
BeamState manufactured_source(const ManufacturedSetup& setup, const Grid& grid, double t) {
    const std::size_t m = grid.n_interior();
    const double decay = std::exp(-t);
    const double k2 = std::pow(std::numbers::pi / setup.length, 2);
    BeamState f = BeamState::zeros(m, t);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = grid.interior_node(i);
        const auto e = profiles(x, setup.length);
        const double p = setup.p(x);
        const double dp = setup.p.derivative(x, 1);
        const double ddp = setup.p.derivative(x, 2);
        const double q = setup.q(x);
        const double bending = ddp * e.s_xx + 2.0 * dp * e.s_xxx + p * e.s_xxxx;
        const double theta_xx = -k2 * e.sine;
        // u_tt + (p u_xx)_xx + 2 q u_t + kappa theta_xx
        f.v[i] = decay * (e.s + bending - 2.0 * q * e.s + setup.kappa * theta_xx);
        // theta_t - eta theta_xx - kappa u_xxt
        f.theta[i] = decay * (-e.sine - setup.eta * theta_xx + setup.kappa * e.s_xx);
    }
    return f;
}

double l2_error(const BeamState& a, const BeamState& b, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        const double du = a.u[i] - b.u[i];
        const double dt = a.theta[i] - b.theta[i];
        s += h * (du * du + dt * dt);
    }
    return std::sqrt(s);
}

struct ForcedRun {
    BlockOperator op;
    BeamState final_state;
};

ForcedRun forced_run(const ManufacturedSetup& setup, std::size_t n_cells, std::size_t n_steps) {
    const auto grid = build_grid(setup.length, n_cells);
    auto op = assemble_generator(grid, sample_coefficients(grid, setup.p, setup.q, setup.kappa, setup.eta));
    const double dt = setup.t_final / static_cast<double>(n_steps);
    const auto plan = build_plan(op, dt, setup.t_final);

    BeamState state = manufactured_state(grid, 0.0);
    BeamState source = manufactured_source(setup, grid, 0.0);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_next = static_cast<double>(k) * dt;
        BeamState source_next = manufactured_source(setup, grid, t_next);
        auto packed = plan.rhs() * pack_interleaved(state);
        const auto forcing = pack_interleaved(0.5 * dt * (source + source_next));
        for (std::size_t i = 0; i < packed.size(); ++i) packed[i] += forcing[i];
        plan.solve(packed);
        state = unpack_interleaved(packed, t_next);
        source = std::move(source_next);
    }
    return {std::move(op), std::move(state)};
}

double observed_order(double coarse_error, double fine_error) { return std::log2(coarse_error / fine_error); }

}  // namespace

BeamState manufactured_state(const Grid& grid, double t) {
    const double decay = std::exp(-t);
    BeamState s = BeamState::zeros(grid.n_interior(), t);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const auto e = profiles(grid.interior_node(i), grid.length());
        s.u[i] = decay * e.s;
        s.v[i] = -decay * e.s;
        s.theta[i] = decay * e.sine;
    }
    return s;
}

ConvergenceLevel manufactured_error(const ManufacturedSetup& setup, std::size_t n_cells, std::size_t n_steps) {
    const auto run = forced_run(setup, n_cells, n_steps);
    const auto exact = manufactured_state(run.op.grid(), setup.t_final);
    return {n_cells, n_steps, setup.t_final / static_cast<double>(n_steps),
            l2_error(run.final_state, exact, run.op.grid().h())};
}

ConvergenceReport manufactured_convergence(std::size_t levels, const ManufacturedSetup& setup) {
    if (levels < 3) {
        throw InvalidArgument(fmt::format("convergence study needs at least 3 levels, got {}", levels));
    }
    ConvergenceReport report;
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t n = setup.coarse_cells << j;
        report.spatial.push_back(manufactured_error(setup, n, n));
    }
    for (std::size_t j = 1; j < levels; ++j) {
        report.spatial_orders.push_back(observed_order(report.spatial[j - 1].error, report.spatial[j].error));
    }

    const std::size_t finest = setup.temporal_base_steps << (levels - 1);
    const auto reference = forced_run(setup, setup.temporal_cells, finest * setup.reference_factor);
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t steps = setup.temporal_base_steps << j;
        const auto run = forced_run(setup, setup.temporal_cells, steps);
        report.temporal.push_back({setup.temporal_cells, steps, setup.t_final / static_cast<double>(steps),
                                   l2_error(run.final_state, reference.final_state, run.op.grid().h())});
    }
    for (std::size_t j = 1; j < levels; ++j) {
        report.temporal_orders.push_back(observed_order(report.temporal[j - 1].error, report.temporal[j].error));
    }
    return report;
}

}  // namespace thermobeam
