#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace thermobeam {

/// Uniform mesh x_i = i*h, i = 0..n_cells, on [0, L].
class Grid {
public:
    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return n_cells_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t n_nodes() const noexcept { return nodes_.size(); }
    /// Interior unknowns per field (boundary values are fixed at zero).
    [[nodiscard]] std::size_t n_interior() const noexcept { return n_cells_ - 1; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] double node(std::size_t i) const { return nodes_.at(i); }
    /// Coordinate of interior unknown k, i.e. node k + 1.
    [[nodiscard]] double interior_node(std::size_t k) const { return nodes_.at(k + 1); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    friend Grid build_grid(double length, std::size_t n_cells);
    Grid() = default;

    double length_ = 0.0;
    std::size_t n_cells_ = 0;
    double h_ = 0.0;
    std::vector<double> nodes_;
};

/// Throws InvalidArgument for length <= 0 or n_cells < 4.
Grid build_grid(double length, std::size_t n_cells);

/// A coefficient profile from the built-in catalog:
///   constant(c)              c
///   affine(a, b)             a + b x
///   sin_bump(base, amp, f)   base + amp sin(2 pi f x)
/// Derivatives are analytic so manufactured sources can be formed exactly.
class CoefficientFunction {
public:
    enum class Kind { constant, affine, sin_bump };

    static CoefficientFunction constant(double c);
    static CoefficientFunction affine(double a, double b);
    static CoefficientFunction sin_bump(double base, double amplitude, double frequency);

    /// Parses "constant(1)", "affine(1, 0.5)", "sin_bump(2, 1, 1)".
    static CoefficientFunction parse(const std::string& text);

    [[nodiscard]] double operator()(double x) const { return derivative(x, 0); }
    /// order in {0, 1, 2}.
    [[nodiscard]] double derivative(double x, int order) const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const CoefficientFunction&, const CoefficientFunction&) = default;

private:
    CoefficientFunction(Kind kind, double a, double b, double c) : kind_(kind), a_(a), b_(b), c_(c) {}

    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
};

/// Strict mode enforces q > 0 and kappa > 0. Analysis mode admits q >= 0 and
/// kappa >= 0 so decoupled or undamped reference problems can be built.
enum class PositivityMode { strict, analysis };

struct CoefficientField {
    std::vector<double> p;  ///< rigidity at every node
    std::vector<double> q;  ///< damping density at every node
    double kappa = 0.0;
    double eta = 0.0;
    double alpha1 = 0.0;  ///< min p
    double alpha2 = 0.0;  ///< max p
    double alpha3 = 0.0;  ///< min q
    double alpha4 = 0.0;  ///< max q
    PositivityMode mode = PositivityMode::strict;
};

CoefficientField sample_coefficients(const Grid& grid, const CoefficientFunction& p_fn,
                                     const CoefficientFunction& q_fn, double kappa, double eta,
                                     PositivityMode mode = PositivityMode::strict);

}  // namespace thermobeam
