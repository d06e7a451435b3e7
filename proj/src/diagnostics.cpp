#include "thermobeam/diagnostics.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace thermobeam {

double energy(const BeamState& s, const BlockOperator& op) {
    op.check(s);
    const auto uxx = op.second_derivative().apply(s.u);
    const auto w = op.node_weights();
    const auto& p = op.coeffs().p;
    double bending = 0.0;
    for (std::size_t k = 0; k < uxx.size(); ++k) bending += (w[k] * p[k]) * (uxx[k] * uxx[k]);
    const auto mw = op.mass_weights();
    double kinetic = 0.0;
    double thermal = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        kinetic += mw[i] * (s.v[i] * s.v[i]);
        thermal += mw[i] * (s.theta[i] * s.theta[i]);
    }
    return 0.5 * (bending + kinetic + thermal);
}

double dissipation(const BeamState& s, const BlockOperator& op) {
    op.check(s);
    const auto mw = op.mass_weights();
    const auto q = op.q_interior();
    double damping = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) damping += mw[i] * q[i] * (s.v[i] * s.v[i]);

    const double h = op.grid().h();
    const std::size_t m = s.theta.size();
    double gradient = 0.0;
    for (std::size_t e = 0; e <= m; ++e) {
        const double left = e == 0 ? 0.0 : s.theta[e - 1];
        const double right = e == m ? 0.0 : s.theta[e];
        const double slope = (right - left) / h;
        gradient += h * (slope * slope);
    }
    return -2.0 * damping - op.eta() * gradient;
}

double f1(const BeamState& s, const BlockOperator& op) {
    op.check(s);
    const auto mw = op.mass_weights();
    const auto q = op.q_interior();
    // sum w u (v + q u): cancels exactly when v = -q u.
    double total = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) total += mw[i] * s.u[i] * (s.v[i] + q[i] * s.u[i]);
    return total;
}

namespace {
double poincare_constant(const BlockOperator& op) {
    const double r = op.grid().length() / std::numbers::pi;
    return r * r;
}
}  // namespace

double mu_constant(const BlockOperator& op) {
    const double cp = poincare_constant(op);
    const auto& c = op.coeffs();
    return 0.5 + (0.5 + c.alpha4) * cp * cp / c.alpha1;
}

double default_epsilon(const BlockOperator& op) { return std::min(0.1, 1.0 / (2.0 * mu_constant(op))); }

double lyapunov_g(const BeamState& s, const BlockOperator& op, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument(fmt::format("epsilon must be strictly positive, got {}", epsilon));
    }
    return energy(s, op) + epsilon * f1(s, op);
}

LyapunovConstants lyapunov_constants(const BlockOperator& op, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw InvalidArgument(fmt::format("epsilon must be strictly positive, got {}", epsilon));
    }
    const auto& c = op.coeffs();
    const double cp = poincare_constant(op);
    LyapunovConstants k;
    k.mu = mu_constant(op);
    k.epsilon = epsilon;
    k.c1 = 2.0;
    k.c2 = cp * std::max(1.0, 0.5 * c.kappa * c.kappa);
    k.c3 = 1.0 / (2.0 * c.alpha1);
    k.alpha = c.alpha1;
    k.k = 1.0 - k.alpha * k.c3;
    k.k1 = c.alpha3 > 0.0 ? 2.0 - epsilon * k.c1 / c.alpha3 : -std::numeric_limits<double>::infinity();
    k.k2 = c.eta - epsilon * k.c2 * (1.0 + 1.0 / k.alpha);
    k.sandwich_margin = 1.0 - epsilon * k.mu;
    if (k.sandwich_margin > 0.0) {
        k.rate = 2.0 * k.k * epsilon / k.sandwich_margin;
        k.prefactor = (1.0 + epsilon * k.mu) / k.sandwich_margin;
    }
    return k;
}

DiagnosticsRecord make_record(const BeamState& s, const BlockOperator& op, double epsilon,
                              double balance_residual) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.energy = energy(s, op);
    r.dissipation = dissipation(s, op);
    r.balance_residual = balance_residual;
    r.f1 = f1(s, op);
    r.lyapunov_g = r.energy + epsilon * r.f1;
    return r;
}

DecayFit fit_decay(std::span<const DiagnosticsRecord> records, std::pair<double, double> window) {
    const auto [t0, t1] = window;
    if (!(t1 > t0)) {
        throw InvalidArgument(fmt::format("fit window [{}, {}] is empty", t0, t1));
    }
    if (records.empty()) {
        throw InsufficientDataError("no records to fit");
    }
    const double e0 = records.front().energy;
    if (!(e0 > 0.0)) {
        throw DegenerateFitError("initial energy is zero; there is no decay to fit");
    }

    std::vector<double> ts;
    std::vector<double> logs;
    std::size_t in_window = 0;
    std::size_t below_floor = 0;
    for (const auto& r : records) {
        if (r.t < t0 || r.t > t1) continue;
        ++in_window;
        if (!(r.energy > 0.0)) {
            throw DegenerateFitError(fmt::format(
                "energy is zero at t = {} inside the fit window [{}, {}]; shrink the window", r.t, t0, t1));
        }
        if (r.energy < kEnergyFloor * e0) {
            ++below_floor;
            continue;
        }
        ts.push_back(r.t);
        logs.push_back(std::log(r.energy));
    }
    if (in_window < kMinFitPoints || ts.size() < kMinFitPoints) {
        throw InsufficientDataError(fmt::format(
            "{} usable records in window [{}, {}] ({} below the energy floor); need at least {}", ts.size(),
            t0, t1, below_floor, kMinFitPoints));
    }

    const auto n = static_cast<double>(ts.size());
    double tmean = 0.0;
    double ymean = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tmean += ts[i];
        ymean += logs[i];
    }
    tmean /= n;
    ymean /= n;
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tmean) * (ts[i] - tmean);
        sty += (ts[i] - tmean) * (logs[i] - ymean);
    }
    const double slope = sty / stt;
    const double intercept = ymean - slope * tmean;
    double sq = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] - (intercept + slope * ts[i]);
        sq += r * r;
    }

    DecayFit fit;
    fit.m = -slope;
    fit.M = std::exp(intercept) / e0;
    fit.fit_window = {ts.front(), ts.back()};
    fit.residual_rms = std::sqrt(sq / n);
    fit.n_points = ts.size();
    fit.n_below_floor = below_floor;
    return fit;
}

}  // namespace thermobeam
