#include "thermobeam/scenario.hpp"

#include "thermobeam/csv_io.hpp"
#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <future>
#include <ostream>

namespace thermobeam {

void write_summary(std::ostream& os, const RunSummary& s) {
    auto kv = [&](std::string_view key, const std::string& value) { os << key << " = " << value << '\n'; };
    kv("name", s.name);
    kv("fit_status", s.fit_status);
    if (s.fit) {
        kv("fit_m", format_value(s.fit->m));
        kv("fit_M", format_value(s.fit->M));
        kv("fit_t0", format_value(s.fit->fit_window.first));
        kv("fit_t1", format_value(s.fit->fit_window.second));
        kv("fit_residual_rms", format_value(s.fit->residual_rms));
        kv("fit_points", std::to_string(s.fit->n_points));
    } else {
        kv("fit_message", s.fit_message);
    }
    kv("initial_energy", format_value(s.initial_energy));
    kv("final_energy", format_value(s.final_energy));
    kv("max_balance_residual", format_value(s.max_balance_residual));
    kv("budget_defect", format_value(s.budget_defect));
    kv("energy_increase_steps", std::to_string(s.energy_increase_steps));
    kv("max_step_g_increase", format_value(s.max_step_g_increase));
    kv("mu", format_value(s.constants.mu));
    kv("epsilon", format_value(s.constants.epsilon));
    kv("sandwich_margin", format_value(s.constants.sandwich_margin));
    kv("K", format_value(s.constants.k));
    kv("K1", format_value(s.constants.k1));
    kv("K2", format_value(s.constants.k2));
    kv("constants_positive", s.constants.all_positive() ? "true" : "false");
    if (s.spectrum) {
        kv("spectrum_method", to_string(s.spectrum->method));
        kv("abscissa", format_value(s.spectrum->abscissa));
    }
    for (std::size_t i = 0; i < s.warnings.size(); ++i) {
        // Comment lines keep the file parseable.
        os << "# warning: " << s.warnings[i] << '\n';
    }
}

BlockOperator build_operator(const ScenarioConfig& cfg) {
    const auto grid = build_grid(cfg.length, cfg.n_cells);
    return assemble_generator(grid, sample_coefficients(grid, cfg.p, cfg.q, cfg.kappa, cfg.eta));
}

BeamState initial_state(const ScenarioConfig& cfg, const Grid& grid, std::vector<std::string>* warnings) {
    auto warn = [&](std::string message) {
        if (warnings) warnings->push_back(std::move(message));
    };
    switch (cfg.initial) {
        case InitialKind::zero:
            return BeamState::zeros(grid.n_interior());
        case InitialKind::manufactured:
            return manufactured_state(grid, 0.0);
        case InitialKind::custom:
            return read_state_csv(cfg.custom_file, grid);
        case InitialKind::gauss_theta: {
            const double center = cfg.pulse_center();
            auto pulse = [&](double x) { return cfg.amplitude * std::exp(-(x - center) * (x - center) / cfg.sigma2); };
            BeamState s = BeamState::zeros(grid.n_interior());
            for (std::size_t i = 0; i < s.theta.size(); ++i) s.theta[i] = pulse(grid.interior_node(i));

            const double sigma = std::sqrt(cfg.sigma2);
            if (sigma < 4.0 * grid.h()) {
                warn(fmt::format("pulse width sigma = {:g} is below 4h = {:g}; the pulse is under-resolved", sigma,
                                 4.0 * grid.h()));
            }
            const double edge = std::max(std::abs(pulse(0.0)), std::abs(pulse(grid.length())));
            if (edge > 1e-10 * std::abs(cfg.amplitude)) {
                warn(fmt::format("pulse value {:g} at the boundary was clipped to zero", edge));
            }
            return s;
        }
    }
    throw InvalidArgument("unknown initial condition");
}

Simulation simulate(const ScenarioConfig& cfg, const SimulateOptions& options) {
    validate(cfg);
    auto op = build_operator(cfg);
    RunSummary summary;
    summary.name = cfg.name;

    const double epsilon = cfg.epsilon.value_or(default_epsilon(op));
    const auto plan = build_plan(op, cfg.dt, cfg.t_end, cfg.record_stride);
    BeamState start = initial_state(cfg, op.grid(), &summary.warnings);
    if (options.initial_scale != 1.0) start *= options.initial_scale;

    RunOptions run_options;
    run_options.epsilon = epsilon;
    run_options.keep_states = false;
    auto traj = run(plan, op, std::move(start), {}, run_options);

    try {
        summary.fit = fit_decay(traj.records, cfg.fit_window());
        summary.fit_status = "ok";
    } catch (const DegenerateFitError& e) {
        summary.fit_status = "degenerate";
        summary.fit_message = e.what();
    } catch (const InsufficientDataError& e) {
        summary.fit_status = "insufficient-data";
        summary.fit_message = e.what();
    }

    summary.initial_energy = traj.stats.initial_energy;
    summary.final_energy = traj.stats.final_energy;
    summary.max_balance_residual = traj.stats.max_abs_balance_residual;
    summary.budget_defect = traj.stats.budget_defect();
    summary.energy_increase_steps = traj.stats.energy_increase_steps;
    summary.max_step_g_increase = traj.stats.max_step_g_increase;
    summary.constants = lyapunov_constants(op, epsilon);
    if (options.with_spectrum) {
        const auto method = cfg.n_cells <= kDenseMaxCells ? SpectrumMethod::dense : SpectrumMethod::shifted_power;
        summary.spectrum = spectral_abscissa(op, method);
    }
    return {std::move(op), std::move(traj), std::move(summary)};
}

std::filesystem::path default_output_directory() {
    if (const char* env = std::getenv("THERMOBEAM_OUT"); env != nullptr && *env != '\0') return env;
    return "out";
}

RunOutput run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                       const SimulateOptions& options) {
    auto sim = simulate(cfg, options);
    std::filesystem::create_directories(out_dir);

    RunOutput out;
    out.diagnostics_path = out_dir / (cfg.name + "_diagnostics.csv");
    out.final_state_path = out_dir / (cfg.name + "_final_state.csv");
    out.summary_path = out_dir / (cfg.name + "_summary.txt");
    write_file_atomically(out.diagnostics_path,
                          [&](std::ostream& os) { write_diagnostics_csv(os, sim.trajectory.records); });
    write_file_atomically(out.final_state_path, [&](std::ostream& os) {
        write_state_csv(os, sim.op.grid(), sim.trajectory.final_state);
    });
    write_file_atomically(out.summary_path, [&](std::ostream& os) { write_summary(os, sim.summary); });
    out.summary = std::move(sim.summary);
    return out;
}

std::vector<RunOutput> run_sweep(const ScenarioConfig& base, const std::vector<double>& sigma2_values,
                                 const std::filesystem::path& out_dir, const SimulateOptions& options) {
    std::vector<ScenarioConfig> configs;
    for (double s2 : sigma2_values) {
        ScenarioConfig c = base;
        c.sigma2 = s2;
        c.name = fmt::format("{}_sigma2_{:g}", base.name, s2);
        validate(c);
        configs.push_back(std::move(c));
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::future<RunOutput>> jobs;
    for (const auto& c : configs) {
        jobs.push_back(std::async(std::launch::async, [&c, &out_dir, &options] { return run_scenario(c, out_dir, options); }));
    }
    std::vector<RunOutput> results;
    for (auto& j : jobs) results.push_back(j.get());
    return results;
}

}  // namespace thermobeam
