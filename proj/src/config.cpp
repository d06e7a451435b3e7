#include "thermobeam/config.hpp"

#include "thermobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace thermobeam {

std::string to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::gauss_theta: return "gauss_theta";
        case InitialKind::zero: return "zero";
        case InitialKind::manufactured: return "manufactured";
        case InitialKind::custom: return "custom";
    }
    return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view text, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigParseError(line, fmt::format("'{}' is not a number", text));
    }
    return value;
}

std::uint64_t to_unsigned(std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigParseError(line, fmt::format("'{}' is not a non-negative integer", text));
    }
    return value;
}

InitialKind to_initial(std::string_view text, std::size_t line) {
    for (auto kind : {InitialKind::gauss_theta, InitialKind::zero, InitialKind::manufactured, InitialKind::custom}) {
        if (text == to_string(kind)) return kind;
    }
    throw ConfigParseError(
        line, fmt::format("unknown initial condition '{}' (known: gauss_theta, zero, manufactured, custom)", text));
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, std::size_t)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table{
        {"name", [](auto& c, auto v, auto) { c.name = std::string(v); }},
        {"length", [](auto& c, auto v, auto l) { c.length = to_double(v, l); }},
        {"n_cells", [](auto& c, auto v, auto l) { c.n_cells = to_unsigned(v, l); }},
        {"dt", [](auto& c, auto v, auto l) { c.dt = to_double(v, l); }},
        {"t_end", [](auto& c, auto v, auto l) { c.t_end = to_double(v, l); }},
        {"p",
         [](auto& c, auto v, auto l) {
             try {
                 c.p = CoefficientFunction::parse(std::string(v));
             } catch (const InvalidArgument& e) {
                 throw ConfigParseError(l, e.what());
             }
         }},
        {"q",
         [](auto& c, auto v, auto l) {
             try {
                 c.q = CoefficientFunction::parse(std::string(v));
             } catch (const InvalidArgument& e) {
                 throw ConfigParseError(l, e.what());
             }
         }},
        {"kappa", [](auto& c, auto v, auto l) { c.kappa = to_double(v, l); }},
        {"eta", [](auto& c, auto v, auto l) { c.eta = to_double(v, l); }},
        {"initial", [](auto& c, auto v, auto l) { c.initial = to_initial(v, l); }},
        {"amplitude", [](auto& c, auto v, auto l) { c.amplitude = to_double(v, l); }},
        {"sigma2", [](auto& c, auto v, auto l) { c.sigma2 = to_double(v, l); }},
        {"center", [](auto& c, auto v, auto l) { c.center = to_double(v, l); }},
        {"custom_file", [](auto& c, auto v, auto) { c.custom_file = std::string(v); }},
        {"epsilon",
         [](auto& c, auto v, auto l) {
             if (v == "auto") {
                 c.epsilon.reset();
             } else {
                 c.epsilon = to_double(v, l);
             }
         }},
        {"record_stride", [](auto& c, auto v, auto l) { c.record_stride = to_unsigned(v, l); }},
        {"seed", [](auto& c, auto v, auto l) { c.seed = to_unsigned(v, l); }},
        {"fit_window_start", [](auto& c, auto v, auto l) { c.fit_window_start = to_double(v, l); }},
        {"fit_window_end", [](auto& c, auto v, auto l) { c.fit_window_end = to_double(v, l); }},
    };
    return table;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string default_name) {
    ScenarioConfig cfg;
    cfg.name = std::move(default_name);
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigParseError(line_no, fmt::format("expected 'key = value', got '{}'", line));
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigParseError(line_no, fmt::format("unknown key '{}'", key));
        }
        if (!seen.insert(std::string(key)).second) {
            throw ConfigParseError(line_no, fmt::format("key '{}' given twice", key));
        }
        if (value.empty()) {
            throw ConfigParseError(line_no, fmt::format("key '{}' has no value", key));
        }
        it->second(cfg, value, line_no);
    }
    return cfg;
}

std::vector<std::string> validation_errors(const ScenarioConfig& c) {
    std::vector<std::string> errs;
    auto positive = [&](double value, const char* key) {
        if (!(value > 0.0) || !std::isfinite(value)) errs.push_back(fmt::format("{} must be positive, got {}", key, value));
    };

    const bool name_ok = !c.name.empty() && std::all_of(c.name.begin(), c.name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    });
    if (!name_ok) errs.push_back(fmt::format("name '{}' must be non-empty and use only [A-Za-z0-9_.-]", c.name));

    positive(c.length, "length");
    if (c.n_cells < 4) errs.push_back(fmt::format("n_cells must be at least 4, got {}", c.n_cells));
    positive(c.dt, "dt");
    if (!(c.t_end > c.dt) || !std::isfinite(c.t_end)) {
        errs.push_back(fmt::format("t_end ({}) must exceed dt ({})", c.t_end, c.dt));
    }
    positive(c.kappa, "kappa");
    positive(c.eta, "eta");
    if (c.record_stride < 1) errs.push_back("record_stride must be at least 1");
    if (c.epsilon) positive(*c.epsilon, "epsilon");

    if (c.length > 0.0 && std::isfinite(c.length) && c.n_cells >= 4) {
        const auto grid = build_grid(c.length, c.n_cells);
        for (const auto& [fn, key] : {std::pair{&c.p, "p"}, std::pair{&c.q, "q"}}) {
            for (std::size_t i = 0; i < grid.n_nodes(); ++i) {
                const double value = (*fn)(grid.node(i));
                if (!(value > 0.0) || !std::isfinite(value)) {
                    errs.push_back(fmt::format("{} = {} is not strictly positive at node {} (x = {}), value {}", key,
                                               fn->to_string(), i, grid.node(i), value));
                    break;
                }
            }
        }
    }

    switch (c.initial) {
        case InitialKind::gauss_theta:
            positive(c.sigma2, "sigma2");
            if (!std::isfinite(c.amplitude)) errs.push_back("amplitude must be finite");
            if (c.center && !(*c.center >= 0.0 && *c.center <= c.length)) {
                errs.push_back(fmt::format("center {} lies outside [0, {}]", *c.center, c.length));
            }
            break;
        case InitialKind::custom:
            if (c.custom_file.empty()) {
                errs.push_back("initial = custom requires custom_file");
            } else if (!std::filesystem::exists(c.custom_file)) {
                errs.push_back(fmt::format("custom_file '{}' does not exist", c.custom_file));
            }
            break;
        case InitialKind::zero:
        case InitialKind::manufactured:
            break;
    }

    const auto [w0, w1] = c.fit_window();
    if (!(w1 > w0) || w0 < 0.0) {
        errs.push_back(fmt::format("fit window [{}, {}] must satisfy 0 <= start < end", w0, w1));
    }
    return errs;
}

void validate(const ScenarioConfig& cfg) {
    auto errs = validation_errors(cfg);
    if (!errs.empty()) throw ConfigValidationError(std::move(errs));
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument(fmt::format("cannot read config file '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto cfg = parse_config(buf.str(), path.stem().string());
    validate(cfg);
    return cfg;
}

std::string format_config(const ScenarioConfig& c) {
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
    auto num = [](double x) { return fmt::format("{:.17g}", x); };
    line("name", c.name);
    line("length", num(c.length));
    line("n_cells", std::to_string(c.n_cells));
    line("dt", num(c.dt));
    line("t_end", num(c.t_end));
    line("p", c.p.to_string());
    line("q", c.q.to_string());
    line("kappa", num(c.kappa));
    line("eta", num(c.eta));
    line("initial", to_string(c.initial));
    line("amplitude", num(c.amplitude));
    line("sigma2", num(c.sigma2));
    if (c.center) line("center", num(*c.center));
    if (!c.custom_file.empty()) line("custom_file", c.custom_file);
    line("epsilon", c.epsilon ? num(*c.epsilon) : "auto");
    line("record_stride", std::to_string(c.record_stride));
    line("seed", std::to_string(c.seed));
    if (c.fit_window_start) line("fit_window_start", num(*c.fit_window_start));
    if (c.fit_window_end) line("fit_window_end", num(*c.fit_window_end));
    return out;
}

namespace {

Preset heat_pulse(const char* name, double sigma2) {
    ScenarioConfig c;
    c.name = name;
    c.sigma2 = sigma2;
    return {name, fmt::format("centered heat pulse, A = 0.2, sigma^2 = {:g}", sigma2), c};
}

std::vector<Preset> build_presets() {
    std::vector<Preset> out;
    out.push_back(heat_pulse("fig1_sigma2_1e-4", 1e-4));
    out.push_back(heat_pulse("fig1_sigma2_1e-3", 1e-3));
    out.push_back(heat_pulse("fig1_sigma2_1e-2", 1e-2));

    ScenarioConfig zero;
    zero.name = "zero";
    zero.initial = InitialKind::zero;
    out.push_back({"zero", "zero initial data; the energy stays identically zero", zero});

    ScenarioConfig mms;
    mms.name = "manufactured";
    mms.initial = InitialKind::manufactured;
    mms.n_cells = 64;
    mms.p = CoefficientFunction::affine(1.0, 0.5);
    mms.q = CoefficientFunction::affine(1.0, 1.0);
    out.push_back({"manufactured",
                   "variable-coefficient beam started from the manufactured profile (used by `convergence`)", mms});
    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = build_presets();
    return table;
}

std::optional<ScenarioConfig> find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p.config;
    }
    return std::nullopt;
}

ScenarioConfig resolve_config(const std::string& name_or_path) {
    if (auto preset = find_preset(name_or_path)) return *preset;
    if (!std::filesystem::exists(name_or_path)) {
        throw InvalidArgument(fmt::format("'{}' is neither a preset nor a readable config file", name_or_path));
    }
    return load_config(name_or_path);
}

}  // namespace thermobeam
