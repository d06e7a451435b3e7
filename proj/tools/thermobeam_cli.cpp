// Command-line front end: simulate, decay-fit, spectrum, dissipativity,
// convergence, presets.
//
// Exit codes: 0 success, 1 validation error, 2 runtime or check failure.

#include "thermobeam/analysis.hpp"
#include "thermobeam/config.hpp"
#include "thermobeam/csv_io.hpp"
#include "thermobeam/errors.hpp"
#include "thermobeam/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace tb = thermobeam;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

/// Thrown when a check (certificate, order window, abscissa sign) fails.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_summary(const tb::RunOutput& out) {
    const auto& s = out.summary;
    std::cout << fmt::format("scenario          {}\n", s.name);
    std::cout << fmt::format("diagnostics       {}\n", out.diagnostics_path.string());
    std::cout << fmt::format("final state       {}\n", out.final_state_path.string());
    std::cout << fmt::format("summary           {}\n", out.summary_path.string());
    std::cout << fmt::format("E(0)              {:.6e}\n", s.initial_energy);
    std::cout << fmt::format("E(t_end)          {:.6e}\n", s.final_energy);
    std::cout << fmt::format("budget defect     {:.3e}\n", s.budget_defect);
    std::cout << fmt::format("max balance resid {:.3e}\n", s.max_balance_residual);
    std::cout << fmt::format("epsilon, mu       {:.6g}, {:.6g}\n", s.constants.epsilon, s.constants.mu);
    if (s.fit) {
        std::cout << fmt::format("decay fit         m = {:.6f}, M = {:.6f}, rms = {:.4f} on [{:g}, {:g}]\n", s.fit->m,
                                 s.fit->M, s.fit->residual_rms, s.fit->fit_window.first, s.fit->fit_window.second);
    } else {
        std::cout << fmt::format("decay fit         {} ({})\n", s.fit_status, s.fit_message);
    }
    if (s.spectrum) {
        std::cout << fmt::format("abscissa          {:.10e} ({})\n", s.spectrum->abscissa,
                                 tb::to_string(s.spectrum->method));
    }
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw tb::InvalidArgument(fmt::format("bad value '{}' in list '{}'", item, text));
        }
    }
    if (out.empty()) throw tb::InvalidArgument("empty list");
    return out;
}

int cmd_simulate(const std::string& config, const std::string& sweep, bool spectrum, const std::string& dump) {
    auto cfg = tb::resolve_config(config);
    const auto out_dir = tb::default_output_directory();
    tb::SimulateOptions options;
    options.with_spectrum = spectrum;
    if (!dump.empty()) {
        tb::validate(cfg);
        const auto op = tb::build_operator(cfg);
        tb::write_file_atomically(dump, [&](std::ostream& os) { tb::write_operator_dump(op, os); });
    }
    if (!sweep.empty()) {
        for (const auto& out : tb::run_sweep(cfg, parse_list(sweep), out_dir, options)) {
            print_summary(out);
            std::cout << '\n';
        }
        return 0;
    }
    print_summary(tb::run_scenario(cfg, out_dir, options));
    return 0;
}

int cmd_decay_fit(const std::string& csv, const std::vector<double>& window) {
    const auto records = tb::read_diagnostics_csv(csv);
    const double t_last = records.back().t;
    std::pair<double, double> w{t_last / 10.0, 0.8 * t_last};
    if (!window.empty()) w = {window.at(0), window.at(1)};
    const auto fit = tb::fit_decay(records, w);
    std::cout << fmt::format("window        [{:g}, {:g}]\n", w.first, w.second);
    std::cout << fmt::format("points        {} ({} below energy floor)\n", fit.n_points, fit.n_below_floor);
    std::cout << fmt::format("m             {:.10e}\n", fit.m);
    std::cout << fmt::format("M             {:.10e}\n", fit.M);
    std::cout << fmt::format("residual_rms  {:.6e}\n", fit.residual_rms);
    if (!fit.decaying()) throw CheckFailed("fitted rate is not positive");
    return 0;
}

int cmd_spectrum(const std::string& config, bool power, std::size_t n_cells) {
    auto cfg = tb::resolve_config(config);
    if (n_cells != 0) cfg.n_cells = n_cells;
    tb::validate(cfg);
    const auto op = tb::build_operator(cfg);
    const auto method = power ? tb::SpectrumMethod::shifted_power : tb::SpectrumMethod::dense;
    const auto report = tb::spectral_abscissa(op, method);

    const auto out_dir = tb::default_output_directory();
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / (cfg.name + "_spectrum.csv");
    tb::write_file_atomically(path, [&](std::ostream& os) {
        os << "re,im\n";
        for (const auto& z : report.eigenvalues) os << tb::format_value(z.real()) << ',' << tb::format_value(z.imag()) << '\n';
    });
    std::cout << fmt::format("method        {}\n", tb::to_string(report.method));
    std::cout << fmt::format("n_cells       {}\n", cfg.n_cells);
    std::cout << fmt::format("eigenvalues   {}\n", report.n_eigs);
    std::cout << fmt::format("abscissa      {:.10e}\n", report.abscissa);
    std::cout << fmt::format("written       {}\n", path.string());
    if (!(report.abscissa < 0.0)) throw CheckFailed("spectral abscissa is not negative");
    return 0;
}

int cmd_dissipativity(const std::string& config, std::size_t samples, std::uint64_t seed, std::size_t n_cells) {
    auto cfg = tb::resolve_config(config);
    if (n_cells != 0) cfg.n_cells = n_cells;
    tb::validate(cfg);
    const auto op = tb::build_operator(cfg);
    const auto report = tb::dissipativity_certificate(op, samples, seed);
    std::cout << fmt::format("scenario      {}\n", cfg.name);
    std::cout << fmt::format("n_cells       {}\n", cfg.n_cells);
    std::cout << fmt::format("samples       {}\n", report.n_samples);
    std::cout << fmt::format("seed          {}\n", report.seed);
    std::cout << fmt::format("max defect    {:.6e}\n", report.max_defect);
    std::cout << fmt::format("max <AU,U>_H  {:.6e}\n", report.max_form);
    std::cout << fmt::format("certificate   {}\n", report.passes() ? "PASS" : "FAIL");
    if (!report.passes()) throw CheckFailed("dissipativity defect above tolerance");
    return 0;
}

int cmd_convergence(std::size_t levels) {
    const auto report = tb::manufactured_convergence(levels);
    std::cout << "kind,n_cells,n_steps,dt,error,order\n";
    for (std::size_t i = 0; i < report.spatial.size(); ++i) {
        const auto& l = report.spatial[i];
        std::cout << fmt::format("space,{},{},{:.6e},{:.6e},{}\n", l.n_cells, l.n_steps, l.dt, l.error,
                                 i == 0 ? std::string() : fmt::format("{:.4f}", report.spatial_orders[i - 1]));
    }
    for (std::size_t i = 0; i < report.temporal.size(); ++i) {
        const auto& l = report.temporal[i];
        std::cout << fmt::format("time,{},{},{:.6e},{:.6e},{}\n", l.n_cells, l.n_steps, l.dt, l.error,
                                 i == 0 ? std::string() : fmt::format("{:.4f}", report.temporal_orders[i - 1]));
    }
    const bool space_ok = report.spatial_order() >= 1.7 && report.spatial_order() <= 2.3;
    const bool time_ok = report.temporal_order() >= 1.8 && report.temporal_order() <= 2.2;
    std::cout << fmt::format("spatial order  {:.4f} {}\n", report.spatial_order(), space_ok ? "PASS" : "FAIL");
    std::cout << fmt::format("temporal order {:.4f} {}\n", report.temporal_order(), time_ok ? "PASS" : "FAIL");
    if (!space_ok || !time_ok) throw CheckFailed("observed order outside the expected window");
    return 0;
}

int cmd_presets() {
    for (const auto& p : tb::presets()) std::cout << fmt::format("{:<18} {}\n", p.name, p.description);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermoelastic beam simulator and analysis toolkit"};
    app.require_subcommand(1);

    std::string config;
    std::string sweep;
    std::string dump;
    bool with_spectrum = false;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write diagnostics CSVs");
    simulate->add_option("config", config, "Preset name or config file")->required();
    simulate->add_option("--sweep", sweep, "Comma-separated sigma^2 values run concurrently");
    simulate->add_flag("--spectrum", with_spectrum, "Also compute the spectral abscissa");
    simulate->add_option("--dump-operators", dump, "Write D2 and B as triplets")->group("");

    std::string csv;
    std::vector<double> window;
    auto* decay = app.add_subcommand("decay-fit", "Fit E(t) ~ M E(0) exp(-m t) to a diagnostics CSV");
    decay->add_option("csv", csv, "Diagnostics CSV")->required();
    decay->add_option("--window", window, "t0 t1")->expected(2);

    bool dense = false;
    bool power = false;
    std::size_t n_cells = 0;
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the discrete generator");
    spectrum->add_option("config", config, "Preset name or config file")->required();
    auto* dense_flag = spectrum->add_flag("--dense", dense, "Dense eigensolve (default)");
    spectrum->add_flag("--power", power, "Shifted inverse power iteration")->excludes(dense_flag);
    spectrum->add_option("--n-cells", n_cells, "Override the grid size");

    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    std::string diss_config = "fig1_sigma2_1e-2";
    auto* diss = app.add_subcommand("dissipativity", "Check <AU,U>_H against the dissipation on random states");
    diss->add_option("config", diss_config, "Preset name or config file")->capture_default_str();
    diss->add_option("--samples", samples, "Number of random states")->capture_default_str();
    diss->add_option("--seed", seed, "Random seed")->capture_default_str();
    diss->add_option("--n-cells", n_cells, "Override the grid size");

    std::size_t levels = 4;
    auto* conv = app.add_subcommand("convergence", "Manufactured-solution convergence study");
    conv->add_option("--levels", levels, "Refinement levels (>= 3)")->capture_default_str();

    auto* list = app.add_subcommand("presets", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config, sweep, with_spectrum, dump);
        if (decay->parsed()) return cmd_decay_fit(csv, window);
        if (spectrum->parsed()) return cmd_spectrum(config, power, n_cells);
        if (diss->parsed()) return cmd_dissipativity(diss_config, samples, seed, n_cells);
        if (conv->parsed()) return cmd_convergence(levels);
        if (list->parsed()) return cmd_presets();
    } catch (const tb::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cerr << app.help();
    return kExitValidation;
}
