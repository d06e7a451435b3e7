#pragma once

#include "thermobeam/banded.hpp"
#include "thermobeam/grid.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace thermobeam {

/// Phase-space element (u, v, theta) on interior nodes. Boundary values are
/// identically zero and never stored.
struct BeamState {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> theta;
    double t = 0.0;

    static BeamState zeros(std::size_t n_interior, double t = 0.0);

    [[nodiscard]] std::size_t n_interior() const noexcept { return u.size(); }
    [[nodiscard]] bool consistent() const noexcept {
        return v.size() == u.size() && theta.size() == u.size();
    }
    [[nodiscard]] bool finite() const noexcept;

    BeamState& operator+=(const BeamState& other);
    BeamState& operator*=(double factor);
};

BeamState operator+(BeamState a, const BeamState& b);
BeamState operator-(BeamState a, const BeamState& b);
BeamState operator*(double factor, BeamState a);

/// Discrete second derivative from interior displacement to all nodes, using
/// ghost reflection u_{-1} = u_1, u_{n+1} = u_{n-1} for the clamped slope.
class SecondDerivativeMap {
public:
    struct Entry {
        std::size_t col = 0;
        double coef = 0.0;
    };

    explicit SecondDerivativeMap(const Grid& grid);

    [[nodiscard]] std::size_t n_nodes() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t n_interior() const noexcept { return n_interior_; }
    [[nodiscard]] std::span<const Entry> row(std::size_t node) const { return rows_.at(node); }

    /// Node values of u_xx.
    [[nodiscard]] std::vector<double> apply(std::span<const double> u) const;

private:
    std::size_t n_interior_ = 0;
    std::vector<std::vector<Entry>> rows_;
};

/// Tridiagonal (x_{i-1} - 2 x_i + x_{i+1}) / h^2 with homogeneous Dirichlet data.
BandedMatrix assemble_d2(const Grid& grid);

/// B = W^{-1} G^T diag(w p) G, the discrete (p u_xx)_xx with clamped ends.
/// Pentadiagonal and exactly symmetric.
BandedMatrix assemble_biharmonic(const Grid& grid, const CoefficientField& coeffs);

/// The discrete generator
///   A (u, v, theta) = (v, -B u - 2 q v - kappa D2 theta, kappa D2 v + eta D2 theta)
/// together with the quadrature that defines the energy inner product.
class BlockOperator {
public:
    BlockOperator(Grid grid, CoefficientField coeffs);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const CoefficientField& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t n_interior() const noexcept { return grid_.n_interior(); }
    [[nodiscard]] double kappa() const noexcept { return coeffs_.kappa; }
    [[nodiscard]] double eta() const noexcept { return coeffs_.eta; }
    [[nodiscard]] bool analysis_mode() const noexcept { return coeffs_.mode == PositivityMode::analysis; }

    /// Shared by the v-theta coupling in both directions and by the heat block.
    [[nodiscard]] const BandedMatrix& d2() const noexcept { return d2_; }
    [[nodiscard]] const BandedMatrix& biharmonic() const noexcept { return b_; }
    [[nodiscard]] const SecondDerivativeMap& second_derivative() const noexcept { return g_; }

    /// Trapezoid weights on interior unknowns (all equal to h).
    [[nodiscard]] std::span<const double> mass_weights() const noexcept { return mass_weights_; }
    /// Trapezoid weights on all nodes, used for the bending term.
    [[nodiscard]] std::span<const double> node_weights() const noexcept { return node_weights_; }
    /// q at interior nodes.
    [[nodiscard]] std::span<const double> q_interior() const noexcept { return q_interior_; }

    [[nodiscard]] BeamState apply(const BeamState& state) const;

    /// Throws DimensionError if the state does not live on this grid.
    void check(const BeamState& state) const;

private:
    Grid grid_;
    CoefficientField coeffs_;
    SecondDerivativeMap g_;
    BandedMatrix d2_;
    BandedMatrix b_;
    std::vector<double> mass_weights_;
    std::vector<double> node_weights_;
    std::vector<double> q_interior_;
};

BlockOperator assemble_generator(const Grid& grid, const CoefficientField& coeffs);

/// <U1, U2>_H = sum w p (G u1)(G u2) + sum w v1 v2 + sum w theta1 theta2.
double inner_product(const BeamState& a, const BeamState& b, const BlockOperator& op);

/// Interleaved unknown index: node k carries (u_k, v_k, theta_k).
[[nodiscard]] constexpr std::size_t interleaved(std::size_t node, std::size_t field) noexcept {
    return 3 * node + field;
}
std::vector<double> pack_interleaved(const BeamState& state);
BeamState unpack_interleaved(std::span<const double> packed, double t = 0.0);

/// shift * I + scale * A in the interleaved ordering.
BandedMatrix assemble_shifted_generator(const BlockOperator& op, double shift, double scale);

/// Triplet dump of D2 and B, each preceded by a "# name rows kl ku" line.
void write_operator_dump(const BlockOperator& op, std::ostream& os);

}  // namespace thermobeam
