#pragma once

#include "thermobeam/operators.hpp"

#include <span>
#include <utility>
#include <vector>

namespace thermobeam {

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;       ///< instantaneous dE/dt at the recorded state
    double balance_residual = 0.0;  ///< E(t_k) - E(t_{k-1}) - dt * sum of midpoint dissipation
    double f1 = 0.0;
    double lyapunov_g = 0.0;
};

/// E = 1/2 (sum w p (u_xx)^2 + sum w v^2 + sum w theta^2)
double energy(const BeamState& state, const BlockOperator& op);

/// -2 sum w q v^2 - eta S(theta), S the sum over edges of h ((theta_{i+1} - theta_i) / h)^2
/// with theta = 0 at both ends. Never positive.
double dissipation(const BeamState& state, const BlockOperator& op);

/// sum w u v + sum w q u^2
double f1(const BeamState& state, const BlockOperator& op);

/// Constant bounding |F1| <= mu E: 1/2 + (1/2 + alpha4) C_p^2 / alpha1 with the
/// continuum Poincare constant C_p = (L / pi)^2.
double mu_constant(const BlockOperator& op);

/// min(0.1, 1 / (2 mu)); keeps 1 - epsilon mu >= 1/2.
double default_epsilon(const BlockOperator& op);

/// G = E + epsilon F1 (the second auxiliary functional is taken as zero).
double lyapunov_g(const BeamState& state, const BlockOperator& op, double epsilon);

/// Surrogate constants of the Lyapunov argument. They are computed from the
/// Young/Poincare route with alpha = alpha1 (so K = 1/2), and reported rather
/// than enforced.
struct LyapunovConstants {
    double mu = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double k = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double sandwich_margin = 0.0;  ///< 1 - epsilon mu
    double rate = 0.0;             ///< 2 K epsilon / (1 - epsilon mu), when the margin is positive
    double prefactor = 0.0;        ///< (1 + epsilon mu) / (1 - epsilon mu)

    [[nodiscard]] bool all_positive() const noexcept {
        return sandwich_margin > 0.0 && k > 0.0 && k1 > 0.0 && k2 > 0.0;
    }
};

LyapunovConstants lyapunov_constants(const BlockOperator& op, double epsilon);

DiagnosticsRecord make_record(const BeamState& state, const BlockOperator& op, double epsilon,
                              double balance_residual = 0.0);

struct DecayFit {
    double m = 0.0;             ///< fitted rate, E ~ M E(0) exp(-m t)
    double M = 0.0;             ///< prefactor normalized by E(0)
    std::pair<double, double> fit_window{0.0, 0.0};
    double residual_rms = 0.0;  ///< RMS of ln E residuals
    std::size_t n_points = 0;
    std::size_t n_below_floor = 0;

    [[nodiscard]] bool decaying() const noexcept { return m > 0.0; }
};

/// Records with E below this fraction of E(0) are excluded from fitting.
inline constexpr double kEnergyFloor = 1e-14;
inline constexpr std::size_t kMinFitPoints = 10;

/// Least squares line through (t, ln E) over the records with t in window.
/// E(0) is the energy of the first record. Throws DegenerateFitError when an
/// energy in the window is zero and InsufficientDataError for fewer than 10 points.
DecayFit fit_decay(std::span<const DiagnosticsRecord> records, std::pair<double, double> window);

}  // namespace thermobeam
