#include "thermobeam/timestepper.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace thermobeam {

SolverPlan build_plan(const BlockOperator& op, double dt, double t_end, std::size_t record_stride) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument(fmt::format("time step must be positive, got {}", dt));
    }
    if (!(t_end > dt) || !std::isfinite(t_end)) {
        throw InvalidArgument(fmt::format("end time {} must exceed the time step {}", t_end, dt));
    }
    if (record_stride < 1) {
        throw InvalidArgument("record stride must be at least 1");
    }
    SolverPlan plan(assemble_shifted_generator(op, 1.0, -0.5 * dt), assemble_shifted_generator(op, 1.0, 0.5 * dt));
    plan.dt_ = dt;
    plan.t_end_ = t_end;
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    plan.n_steps_ = static_cast<std::size_t>(std::abs(ratio - nearest) <= 1e-9 * ratio ? nearest : std::ceil(ratio));
    plan.record_stride_ = record_stride;
    plan.n_interior_ = op.n_interior();
    return plan;
}

namespace {

void check_plan(const SolverPlan& plan, const BlockOperator& op) {
    if (plan.n_interior() != op.n_interior()) {
        throw DimensionError(fmt::format("plan built for {} interior nodes, operator has {}", plan.n_interior(),
                                         op.n_interior()));
    }
}

BeamState advance(const SolverPlan& plan, const BeamState& s, double t_next) {
    if (!s.finite()) {
        throw StateCorruptionError(fmt::format("non-finite value in state at t = {}", s.t));
    }
    const auto packed = pack_interleaved(s);
    const auto load = plan.rhs() * packed;
    auto next = load;
    plan.solve(next);
    // One refinement sweep; the H-norm weights stiff displacement modes, so
    // the raw LU backward error shows up in the energy budget.
    auto r = plan.lhs() * next;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = load[i] - r[i];
    plan.solve(r);
    for (std::size_t i = 0; i < r.size(); ++i) next[i] += r[i];
    return unpack_interleaved(next, t_next);
}

}  // namespace

BeamState step(const SolverPlan& plan, const BlockOperator& op, const BeamState& state) {
    check_plan(plan, op);
    op.check(state);
    return advance(plan, state, state.t + plan.dt());
}

double TrajectoryStats::budget_defect() const noexcept {
    return std::abs(final_energy - initial_energy - dissipated);
}

Trajectory run(const SolverPlan& plan, const BlockOperator& op, BeamState initial, const RecordHook& hook,
               const RunOptions& options) {
    check_plan(plan, op);
    op.check(initial);
    if (!initial.finite()) {
        throw StateCorruptionError("initial state contains non-finite values");
    }

    Trajectory traj;
    traj.dt = plan.dt();
    const double t0 = initial.t;

    auto record = make_record(initial, op, options.epsilon);
    traj.records.push_back(record);
    if (options.keep_states) traj.states.push_back(initial);
    if (hook) hook(initial, record);

    auto& stats = traj.stats;
    stats.initial_energy = record.energy;
    double e_prev = record.energy;
    double g_prev = record.lyapunov_g;
    double e_last_record = record.energy;
    double dissipated_since_record = 0.0;

    BeamState current = std::move(initial);
    for (std::size_t k = 1; k <= plan.n_steps(); ++k) {
        BeamState next = advance(plan, current, t0 + static_cast<double>(k) * plan.dt());

        BeamState mid = 0.5 * (current + next);
        const double budget = plan.dt() * dissipation(mid, op);
        dissipated_since_record += budget;
        stats.dissipated += budget;

        const double e = energy(next, op);
        const double g = e + options.epsilon * f1(next, op);
        if (e > e_prev) {
            ++stats.energy_increase_steps;
            stats.max_step_energy_increase = std::max(stats.max_step_energy_increase, e - e_prev);
        }
        stats.max_step_g_increase = std::max(stats.max_step_g_increase, g - g_prev);
        e_prev = e;
        g_prev = g;
        current = std::move(next);

        if (k % plan.record_stride() == 0 || k == plan.n_steps()) {
            if (e - e_last_record > options.sentinel * e_last_record) {
                throw InstabilityError(fmt::format("energy grew from {:.6e} to {:.6e} before t = {}", e_last_record,
                                                   e, current.t));
            }
            DiagnosticsRecord r;
            r.t = current.t;
            r.energy = e;
            r.dissipation = dissipation(current, op);
            r.balance_residual = e - e_last_record - dissipated_since_record;
            r.f1 = f1(current, op);
            r.lyapunov_g = g;
            stats.max_abs_balance_residual = std::max(stats.max_abs_balance_residual, std::abs(r.balance_residual));
            traj.records.push_back(r);
            if (options.keep_states) traj.states.push_back(current);
            if (hook) hook(current, r);
            e_last_record = e;
            dissipated_since_record = 0.0;
        }
    }
    stats.steps = plan.n_steps();
    stats.final_energy = e_prev;
    traj.final_state = std::move(current);
    return traj;
}

}  // namespace thermobeam
