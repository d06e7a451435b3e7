#pragma once

#include "thermobeam/banded.hpp"
#include "thermobeam/diagnostics.hpp"
#include "thermobeam/operators.hpp"

#include <functional>
#include <span>
#include <vector>

namespace thermobeam {

/// Trapezoidal (Crank-Nicolson) discretization of U' = A U:
///   (I - dt/2 A) U+ = (I + dt/2 A) U
/// solved monolithically in the interleaved (u, v, theta) ordering.
class SolverPlan {
public:
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double t_end() const noexcept { return t_end_; }
    [[nodiscard]] std::size_t n_steps() const noexcept { return n_steps_; }
    [[nodiscard]] std::size_t record_stride() const noexcept { return record_stride_; }
    [[nodiscard]] std::size_t n_interior() const noexcept { return n_interior_; }

    [[nodiscard]] const BandedMatrix& lhs() const noexcept { return lhs_; }
    [[nodiscard]] const BandedMatrix& rhs() const noexcept { return rhs_; }

    /// In-place solve with the factored left-hand side.
    void solve(std::span<double> packed) const { lu_.solve(packed); }

private:
    friend SolverPlan build_plan(const BlockOperator&, double, double, std::size_t);
    SolverPlan(BandedMatrix lhs, BandedMatrix rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)), lu_(lhs_) {}

    double dt_ = 0.0;
    double t_end_ = 0.0;
    std::size_t n_steps_ = 0;
    std::size_t record_stride_ = 1;
    std::size_t n_interior_ = 0;
    BandedMatrix lhs_;
    BandedMatrix rhs_;
    BandedLU lu_;
};

/// Throws InvalidArgument unless dt > 0, t_end > dt and record_stride >= 1.
/// The step count is t_end / dt rounded up, so the last record may sit slightly past t_end.
SolverPlan build_plan(const BlockOperator& op, double dt, double t_end, std::size_t record_stride = 1);

/// One trapezoidal step. Throws StateCorruptionError on non-finite input.
BeamState step(const SolverPlan& plan, const BlockOperator& op, const BeamState& state);

/// Per-step bookkeeping gathered while running.
struct TrajectoryStats {
    std::size_t steps = 0;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    double dissipated = 0.0;                ///< dt * sum of midpoint dissipation over all steps
    double max_step_energy_increase = 0.0;  ///< max(E_{k+1} - E_k, 0) over steps
    std::size_t energy_increase_steps = 0;  ///< steps with E_{k+1} > E_k
    double max_step_g_increase = 0.0;       ///< max(G_{k+1} - G_k, 0) over steps
    double max_abs_balance_residual = 0.0;  ///< over recorded intervals

    /// |E_N - E_0 - dissipated|
    [[nodiscard]] double budget_defect() const noexcept;
};

struct Trajectory {
    std::vector<BeamState> states;  ///< empty unless kept
    std::vector<DiagnosticsRecord> records;
    BeamState final_state;
    double dt = 0.0;
    TrajectoryStats stats;
};

using RecordHook = std::function<void(const BeamState&, const DiagnosticsRecord&)>;

struct RunOptions {
    double epsilon = 0.1;      ///< for the Lyapunov column
    bool keep_states = true;   ///< store the state at every record
    double sentinel = 1e-8;    ///< relative energy growth between records that aborts the run
};

/// Advances from U0 to the plan's end time, recording every record_stride steps
/// and at the final step. Throws InstabilityError if the energy grows between
/// records by more than the sentinel.
Trajectory run(const SolverPlan& plan, const BlockOperator& op, BeamState initial, const RecordHook& hook = {},
               const RunOptions& options = {});

}  // namespace thermobeam
