#include "thermobeam/operators.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace thermobeam {

BeamState BeamState::zeros(std::size_t n_interior, double t) {
    return BeamState{std::vector<double>(n_interior, 0.0), std::vector<double>(n_interior, 0.0),
                     std::vector<double>(n_interior, 0.0), t};
}

bool BeamState::finite() const noexcept {
    auto all_finite = [](const std::vector<double>& xs) {
        return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
    };
    return std::isfinite(t) && all_finite(u) && all_finite(v) && all_finite(theta);
}

BeamState& BeamState::operator+=(const BeamState& other) {
    if (other.u.size() != u.size()) {
        throw DimensionError(fmt::format("state sizes differ: {} vs {}", u.size(), other.u.size()));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] += other.u[i];
        v[i] += other.v[i];
        theta[i] += other.theta[i];
    }
    return *this;
}

BeamState& BeamState::operator*=(double factor) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] *= factor;
        v[i] *= factor;
        theta[i] *= factor;
    }
    return *this;
}

BeamState operator+(BeamState a, const BeamState& b) { return a += b; }

BeamState operator-(BeamState a, const BeamState& b) {
    a += -1.0 * b;
    return a;
}

BeamState operator*(double factor, BeamState a) { return a *= factor; }

SecondDerivativeMap::SecondDerivativeMap(const Grid& grid)
    : n_interior_(grid.n_interior()), rows_(grid.n_nodes()) {
    const auto n = static_cast<long>(grid.n_cells());
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    constexpr std::array<std::pair<long, double>, 3> stencil{{{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
    for (long k = 0; k <= n; ++k) {
        auto& row = rows_[static_cast<std::size_t>(k)];
        for (const auto& [offset, weight] : stencil) {
            long m = k + offset;
            if (m == -1) m = 1;
            if (m == n + 1) m = n - 1;
            if (m < 1 || m > n - 1) continue;  // u_0 = u_n = 0
            const auto col = static_cast<std::size_t>(m - 1);
            auto it = std::find_if(row.begin(), row.end(), [&](const Entry& e) { return e.col == col; });
            if (it == row.end()) {
                row.push_back({col, weight * inv_h2});
            } else {
                it->coef += weight * inv_h2;
            }
        }
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    }
}

std::vector<double> SecondDerivativeMap::apply(std::span<const double> u) const {
    if (u.size() != n_interior_) {
        throw DimensionError(fmt::format("second derivative expects {} unknowns, got {}", n_interior_, u.size()));
    }
    std::vector<double> out(rows_.size(), 0.0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        double s = 0.0;
        for (const auto& e : rows_[k]) s += e.coef * u[e.col];
        out[k] = s;
    }
    return out;
}

BandedMatrix assemble_d2(const Grid& grid) {
    const std::size_t m = grid.n_interior();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    BandedMatrix d2(m, 1, 1);
    for (std::size_t i = 0; i < m; ++i) {
        d2.at(i, i) = -2.0 * inv_h2;
        if (i + 1 < m) {
            d2.at(i, i + 1) = inv_h2;
            d2.at(i + 1, i) = inv_h2;
        }
    }
    return d2;
}

namespace {

std::vector<double> trapezoid_node_weights(const Grid& grid) {
    std::vector<double> w(grid.n_nodes(), grid.h());
    w.front() = 0.5 * grid.h();
    w.back() = 0.5 * grid.h();
    return w;
}

BandedMatrix biharmonic_from(const Grid& grid, const SecondDerivativeMap& g, std::span<const double> p) {
    const std::size_t m = grid.n_interior();
    const auto w = trapezoid_node_weights(grid);
    const double inv_h = 1.0 / grid.h();
    BandedMatrix b(m, 2, 2);
    // Upper triangle only, mirrored afterwards so symmetry is exact.
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        const double wp = w[k] * p[k] * inv_h;
        const auto row = g.row(k);
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t c = a; c < row.size(); ++c) {
                b.add(row[a].col, row[c].col, wp * (row[a].coef * row[c].coef));
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < std::min(m, i + 3); ++j) {
            b.at(j, i) = b(i, j);
        }
    }
    return b;
}

}  // namespace

BandedMatrix assemble_biharmonic(const Grid& grid, const CoefficientField& coeffs) {
    if (coeffs.p.size() != grid.n_nodes()) {
        throw DimensionError(
            fmt::format("rigidity has {} samples for a grid of {} nodes", coeffs.p.size(), grid.n_nodes()));
    }
    return biharmonic_from(grid, SecondDerivativeMap(grid), coeffs.p);
}

BlockOperator::BlockOperator(Grid grid, CoefficientField coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)), g_(grid_) {
    if (coeffs_.p.size() != grid_.n_nodes() || coeffs_.q.size() != grid_.n_nodes()) {
        throw DimensionError(fmt::format("coefficient samples ({}, {}) do not match {} grid nodes",
                                         coeffs_.p.size(), coeffs_.q.size(), grid_.n_nodes()));
    }
    d2_ = assemble_d2(grid_);
    b_ = biharmonic_from(grid_, g_, coeffs_.p);
    mass_weights_.assign(grid_.n_interior(), grid_.h());
    node_weights_ = trapezoid_node_weights(grid_);
    q_interior_.assign(coeffs_.q.begin() + 1, coeffs_.q.end() - 1);
}

void BlockOperator::check(const BeamState& state) const {
    const std::size_t m = n_interior();
    if (state.u.size() != m || state.v.size() != m || state.theta.size() != m) {
        throw DimensionError(fmt::format("state sizes (u {}, v {}, theta {}) do not match {} interior nodes",
                                         state.u.size(), state.v.size(), state.theta.size(), m));
    }
}

BeamState BlockOperator::apply(const BeamState& s) const {
    check(s);
    const std::size_t m = n_interior();
    const auto bu = b_ * s.u;
    const auto d2v = d2_ * s.v;
    const auto d2t = d2_ * s.theta;
    BeamState out = BeamState::zeros(m, s.t);
    for (std::size_t i = 0; i < m; ++i) {
        out.u[i] = s.v[i];
        out.v[i] = -bu[i] - 2.0 * q_interior_[i] * s.v[i] - coeffs_.kappa * d2t[i];
        out.theta[i] = coeffs_.kappa * d2v[i] + coeffs_.eta * d2t[i];
    }
    return out;
}

BlockOperator assemble_generator(const Grid& grid, const CoefficientField& coeffs) {
    return BlockOperator(grid, coeffs);
}

double inner_product(const BeamState& a, const BeamState& b, const BlockOperator& op) {
    op.check(a);
    op.check(b);
    const auto gu_a = op.second_derivative().apply(a.u);
    const auto gu_b = op.second_derivative().apply(b.u);
    const auto w = op.node_weights();
    const auto& p = op.coeffs().p;
    double bending = 0.0;
    for (std::size_t k = 0; k < gu_a.size(); ++k) {
        bending += (w[k] * p[k]) * (gu_a[k] * gu_b[k]);
    }
    const auto mw = op.mass_weights();
    double kinetic = 0.0;
    double thermal = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        kinetic += mw[i] * (a.v[i] * b.v[i]);
        thermal += mw[i] * (a.theta[i] * b.theta[i]);
    }
    return bending + kinetic + thermal;
}

std::vector<double> pack_interleaved(const BeamState& s) {
    std::vector<double> out(3 * s.u.size());
    for (std::size_t k = 0; k < s.u.size(); ++k) {
        out[interleaved(k, 0)] = s.u[k];
        out[interleaved(k, 1)] = s.v[k];
        out[interleaved(k, 2)] = s.theta[k];
    }
    return out;
}

BeamState unpack_interleaved(std::span<const double> packed, double t) {
    if (packed.size() % 3 != 0) {
        throw DimensionError(fmt::format("interleaved vector length {} is not a multiple of 3", packed.size()));
    }
    BeamState s = BeamState::zeros(packed.size() / 3, t);
    for (std::size_t k = 0; k < s.u.size(); ++k) {
        s.u[k] = packed[interleaved(k, 0)];
        s.v[k] = packed[interleaved(k, 1)];
        s.theta[k] = packed[interleaved(k, 2)];
    }
    return s;
}

BandedMatrix assemble_shifted_generator(const BlockOperator& op, double shift, double scale) {
    const std::size_t m = op.n_interior();
    const auto& b = op.biharmonic();
    const auto& d2 = op.d2();
    const auto q = op.q_interior();
    const double kappa = op.kappa();
    const double eta = op.eta();
    // Widest couplings: v_k -> u_{k-2} (7 below), v_k -> u_{k+2} (5 above).
    BandedMatrix out(3 * m, 7, 5);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t ru = interleaved(k, 0);
        const std::size_t rv = interleaved(k, 1);
        const std::size_t rt = interleaved(k, 2);
        out.at(ru, ru) = shift;
        out.at(ru, rv) = scale;
        out.at(rv, rv) = shift - scale * 2.0 * q[k];
        out.at(rt, rt) = shift;
        const std::size_t j0 = k >= 2 ? k - 2 : 0;
        const std::size_t j1 = std::min(m - 1, k + 2);
        for (std::size_t j = j0; j <= j1; ++j) {
            out.add(rv, interleaved(j, 0), -scale * b(k, j));
            const double d = d2(k, j);
            if (d != 0.0) {
                out.add(rv, interleaved(j, 2), -scale * kappa * d);
                out.add(rt, interleaved(j, 1), scale * kappa * d);
                out.add(rt, interleaved(j, 2), scale * eta * d);
            }
        }
    }
    return out;
}

void write_operator_dump(const BlockOperator& op, std::ostream& os) {
    os << fmt::format("# D2 {} {} {}\n", op.d2().size(), op.d2().lower(), op.d2().upper());
    op.d2().write_triplets(os);
    os << fmt::format("# B {} {} {}\n", op.biharmonic().size(), op.biharmonic().lower(),
                      op.biharmonic().upper());
    op.biharmonic().write_triplets(os);
}

}  // namespace thermobeam
