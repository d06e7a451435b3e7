#pragma once

#include "thermobeam/banded.hpp"
#include "thermobeam/grid.hpp"
#include "thermobeam/operators.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace thermobeam {

// ---------------------------------------------------------------------------
// Dissipativity
// ---------------------------------------------------------------------------

inline constexpr double kCertificateTolerance = 1e-10;

struct DissipativityReport {
    double max_defect = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double max_form = 0.0;  ///< largest <AU,U>_H / max(|U|_H^2, 1) seen; never positive for a dissipative A

    [[nodiscard]] bool passes() const noexcept { return max_defect < kCertificateTolerance; }
};

/// Max over seeded random states of
///   |<AU,U>_H - (-2 sum w q v^2 - eta S(theta))| / max(|U|_H^2, 1).
DissipativityReport dissipativity_certificate(const BlockOperator& op, std::size_t n_samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Resolvent at zero
// ---------------------------------------------------------------------------

/// Solves A U = F by elimination: v = f, then the Dirichlet Poisson problem
/// for theta, then the clamped biharmonic problem for u.
class ZeroResolvent {
public:
    explicit ZeroResolvent(const BlockOperator& op);

    [[nodiscard]] BeamState solve(const BeamState& rhs) const;

private:
    const BlockOperator* op_;
    BandedLU d2_lu_;
    BandedLU b_lu_;
};

struct ResolventReport {
    double residual_norm = 0.0;    ///< |A U - F|_H / |F|_H
    double stability_ratio = 0.0;  ///< |U|_H / |F|_H
    bool success = false;
};

inline constexpr double kResolventTolerance = 1e-9;

std::pair<BeamState, ResolventReport> resolve_at_zero(const BlockOperator& op, const BeamState& rhs);

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

enum class SpectrumMethod { dense, shifted_power };
enum class SpectrumScope { full, beam_block };

/// Largest n_cells the dense method accepts (3 (n - 1) <= 765 unknowns).
inline constexpr std::size_t kDenseMaxCells = 256;

struct SpectrumReport {
    double abscissa = 0.0;
    std::size_t n_eigs = 0;
    SpectrumMethod method = SpectrumMethod::dense;
    std::vector<std::complex<double>> eigenvalues;  ///< sorted by descending real part
};

struct ShiftedPowerOptions {
    std::size_t block_size = 6;
    std::size_t max_iterations = 500;
    double tolerance = 1e-12;
    std::uint64_t seed = 1;
};

/// Dense: all eigenvalues of A, computed on the similar matrix R A R^{-1}
/// where R^T R is the energy Gram matrix. In those coordinates A is a skew
/// coupling plus a symmetric dissipative block, which keeps rounding in the
/// real parts at the level of |A|^{1/2} eps.
///
/// Shifted power: block inverse iteration about zero through ZeroResolvent
/// with Rayleigh-Ritz in the energy inner product. It returns the eigenvalues
/// nearest the origin and reports their largest real part; this is the
/// abscissa whenever the least damped mode is among the slowest ones.
SpectrumReport spectral_abscissa(const BlockOperator& op, SpectrumMethod method,
                                 SpectrumScope scope = SpectrumScope::full, const ShiftedPowerOptions& power = {});

std::string to_string(SpectrumMethod method);

// ---------------------------------------------------------------------------
// Manufactured solution
// ---------------------------------------------------------------------------

/// Exact solution u* = e^{-t} sin^2(pi x / L), theta* = e^{-t} sin(pi x / L),
/// driven by source terms added to both equations.
struct ManufacturedSetup {
    double length = 1.0;
    CoefficientFunction p = CoefficientFunction::affine(1.0, 0.5);
    CoefficientFunction q = CoefficientFunction::affine(1.0, 1.0);
    double kappa = 1.0;
    double eta = 1.0;
    double t_final = 0.5;
    std::size_t coarse_cells = 32;         ///< spatial study: n = coarse * 2^j, dt = t_final / n
    std::size_t temporal_cells = 64;       ///< temporal study grid
    std::size_t temporal_base_steps = 80;  ///< temporal study: steps = base * 2^j
    std::size_t reference_factor = 8;      ///< temporal reference uses finest dt / factor
};

struct ConvergenceLevel {
    std::size_t n_cells = 0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> spatial;
    std::vector<double> spatial_orders;
    std::vector<ConvergenceLevel> temporal;
    std::vector<double> temporal_orders;

    [[nodiscard]] double spatial_order() const { return spatial_orders.back(); }
    [[nodiscard]] double temporal_order() const { return temporal_orders.back(); }
};

/// Error of a forced run against the exact solution at t_final, in the
/// discrete L2 norm over u and theta.
ConvergenceLevel manufactured_error(const ManufacturedSetup& setup, std::size_t n_cells, std::size_t n_steps);

/// levels >= 3. Spatial orders come from the exact solution; temporal orders
/// from a fixed grid against a fine-step reference run.
ConvergenceReport manufactured_convergence(std::size_t levels, const ManufacturedSetup& setup = {});

/// Samples of the exact solution at time t (u, u_t, theta).
BeamState manufactured_state(const Grid& grid, double t);

}  // namespace thermobeam
