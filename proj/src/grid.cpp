#include "thermobeam/grid.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace thermobeam {

Grid build_grid(double length, std::size_t n_cells) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidArgument(fmt::format("grid length must be positive and finite, got {}", length));
    }
    if (n_cells < 4) {
        throw InvalidArgument(
            fmt::format("grid needs at least 4 cells for the biharmonic stencil, got {}", n_cells));
    }
    Grid g;
    g.length_ = length;
    g.n_cells_ = n_cells;
    g.h_ = length / static_cast<double>(n_cells);
    g.nodes_.resize(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i) {
        g.nodes_[i] = static_cast<double>(i) * g.h_;
    }
    g.nodes_.back() = length;
    return g;
}

CoefficientFunction CoefficientFunction::constant(double c) { return {Kind::constant, c, 0.0, 0.0}; }

CoefficientFunction CoefficientFunction::affine(double a, double b) { return {Kind::affine, a, b, 0.0}; }

CoefficientFunction CoefficientFunction::sin_bump(double base, double amplitude, double frequency) {
    return {Kind::sin_bump, base, amplitude, frequency};
}

double CoefficientFunction::derivative(double x, int order) const {
    switch (kind_) {
        case Kind::constant:
            return order == 0 ? a_ : 0.0;
        case Kind::affine:
            return order == 0 ? a_ + b_ * x : (order == 1 ? b_ : 0.0);
        case Kind::sin_bump: {
            const double w = 2.0 * std::numbers::pi * c_;
            switch (order) {
                case 0: return a_ + b_ * std::sin(w * x);
                case 1: return b_ * w * std::cos(w * x);
                default: return -b_ * w * w * std::sin(w * x);
            }
        }
    }
    return 0.0;
}

std::string CoefficientFunction::to_string() const {
    switch (kind_) {
        case Kind::constant: return fmt::format("constant({})", a_);
        case Kind::affine: return fmt::format("affine({}, {})", a_, b_);
        case Kind::sin_bump: return fmt::format("sin_bump({}, {}, {})", a_, b_, c_);
    }
    return {};
}

namespace {

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, const std::string& whole) {
    const auto t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw InvalidArgument(fmt::format("bad number '{}' in coefficient '{}'", t, whole));
    }
    return value;
}

}  // namespace

CoefficientFunction CoefficientFunction::parse(const std::string& text) {
    const auto s = trim(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw InvalidArgument(fmt::format("coefficient '{}' is not of the form name(args)", s));
    }
    const auto name = trim(std::string_view(s).substr(0, open));
    const auto inner = std::string_view(s).substr(open + 1, s.size() - open - 2);
    std::vector<double> args;
    if (!trim(inner).empty()) {
        std::size_t start = 0;
        while (true) {
            const auto comma = inner.find(',', start);
            args.push_back(parse_number(std::string(inner.substr(start, comma - start)), s));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    auto expect = [&](std::size_t count) {
        if (args.size() != count) {
            throw InvalidArgument(
                fmt::format("coefficient '{}' takes {} argument(s), got {}", name, count, args.size()));
        }
    };
    if (name == "constant") {
        expect(1);
        return constant(args[0]);
    }
    if (name == "affine") {
        expect(2);
        return affine(args[0], args[1]);
    }
    if (name == "sin_bump") {
        expect(3);
        return sin_bump(args[0], args[1], args[2]);
    }
    throw InvalidArgument(
        fmt::format("unknown coefficient '{}' (known: constant, affine, sin_bump)", name));
}

CoefficientField sample_coefficients(const Grid& grid, const CoefficientFunction& p_fn,
                                     const CoefficientFunction& q_fn, double kappa, double eta,
                                     PositivityMode mode) {
    const bool strict = mode == PositivityMode::strict;
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw InvalidArgument(fmt::format("eta must be strictly positive, got {}", eta));
    }
    const bool kappa_ok = (strict ? kappa > 0.0 : kappa >= 0.0) && std::isfinite(kappa);
    if (!kappa_ok) {
        throw InvalidArgument(fmt::format("kappa must be {}, got {}",
                                          strict ? "strictly positive" : "non-negative", kappa));
    }

    CoefficientField c;
    c.kappa = kappa;
    c.eta = eta;
    c.mode = mode;
    c.p.resize(grid.n_nodes());
    c.q.resize(grid.n_nodes());
    for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
        const double x = grid.node(i);
        c.p[i] = p_fn(x);
        c.q[i] = q_fn(x);
        if (!(c.p[i] > 0.0) || !std::isfinite(c.p[i])) {
            throw CoefficientPositivityError("p", i, x, c.p[i]);
        }
        const bool q_ok = strict ? c.q[i] > 0.0 : c.q[i] >= 0.0;
        if (!q_ok || !std::isfinite(c.q[i])) {
            throw CoefficientPositivityError("q", i, x, c.q[i]);
        }
    }
    const auto [pmin, pmax] = std::minmax_element(c.p.begin(), c.p.end());
    const auto [qmin, qmax] = std::minmax_element(c.q.begin(), c.q.end());
    c.alpha1 = *pmin;
    c.alpha2 = *pmax;
    c.alpha3 = *qmin;
    c.alpha4 = *qmax;
    return c;
}

}  // namespace thermobeam
