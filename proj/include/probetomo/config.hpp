#ifndef PROBETOMO_CONFIG_HPP
#define PROBETOMO_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dce.hpp"
#include "measurement.hpp"
#include "reconstruct.hpp"
#include "states.hpp"

namespace probetomo {

struct ConfigKey {
    const char* section;
    const char* key;
    const char* fallback;
    const char* doc;
};

// clang-format off
inline const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> keys = {
        {"state", "kind", "fock", "fock | superposition | coherent | file"},
        {"state", "n", "1", "Fock level for kind = fock"},
        {"state", "terms", "", "superposition terms 'n re im; n re im; ...' (normalized on load)"},
        {"state", "alpha_abs", "0.7", "coherent amplitude |alpha|"},
        {"state", "alpha_arg", "0", "coherent phase arg(alpha) in rad; accepts pi, pi/3, 2*pi/3"},
        {"state", "file", "", "amplitude list 'n re im' per line for kind = file"},
        {"state", "cutoff", "31", "Fock cutoff n_max of the generated state"},

        {"probe", "g", "1", "coupling g = Omega_1 used to generate the data (absolute)"},
        {"probe", "units", "rabi", "rabi: times in 1/Omega_1, rates in Omega_1 | absolute: as given"},

        {"plan", "delta_t", "0.075", "sampling step"},
        {"plan", "n_t", "4096", "number of interaction times t_k = k delta_t"},
        {"plan", "n_m", "inf", "measurements per time point, or inf for exact expectations"},
        {"plan", "axes", "xyz", "recorded Bloch axes (z is required for reconstruction)"},
        {"plan", "gamma", "0", "exponential damping rate of the signal"},
        {"plan", "gamma_x", "", "per-axis damping override (empty: gamma)"},
        {"plan", "gamma_y", "", "per-axis damping override (empty: gamma)"},
        {"plan", "gamma_z", "", "per-axis damping override (empty: gamma)"},
        {"plan", "seed", "1", "base RNG seed"},
        {"plan", "sweep_n_m", "10, 30, 100, 300, 1000", "noise-sweep: list of N_m"},
        {"plan", "sweep_n_t", "128, 1024", "noise-sweep: list of N_t"},
        {"plan", "sweep_total_time", "", "noise-sweep: fixed T (delta_t = T/N_t); empty keeps delta_t"},
        {"plan", "sweep_seeds", "20", "noise-sweep: independent runs averaged per point"},

        {"spectral", "half_width", "4", "peak window half-width in bins"},
        {"spectral", "levels", "10", "highest Fock level analysed"},
        {"spectral", "population_floor", "1e-3", "populations below this break the phase chain"},
        {"spectral", "trace_tolerance", "0.01", "allowed |sum rho_nn - 1| before a warning"},
        {"spectral", "weighting", "equal", "sum/difference band averaging: equal | snr"},
        {"spectral", "decay_model", "0", "decay rate assumed when fitting peak shapes"},
        {"spectral", "g_min", "0.2", "estimate-g: lower end of the search range (absolute)"},
        {"spectral", "g_max", "3", "estimate-g: upper end of the search range (absolute)"},
        {"spectral", "g_grid", "1000", "estimate-g: coarse grid points"},

        {"dce", "omega", "1", "mode frequency (absolute units)"},
        {"dce", "g_over_omega", "0.5", "coupling g / omega"},
        {"dce", "tau", "auto", "interaction time; auto = pi / (2 g)"},
        {"dce", "points", "", "sweep 'g_over_omega tau; ...' (tau may be auto); empty: single point"},
        {"dce", "cutoff", "31", "Fock cutoff of the joint simulation"},
        {"dce", "dt_int", "2*pi*1e-4", "RK4 cross-check step"},
        {"dce", "rk4_check", "true", "run the RK4 cross-check (skipped above 1e7 steps)"},
        {"dce", "frame", "interaction", "interaction | lab"},
        {"dce", "reconstruct", "true", "reconstruct phi_+- with the probe and recombine"},
        {"dce", "population_floor", "1e-5", "population floor used for phi_+- reconstruction"},
    };
    return keys;
}
// clang-format on

inline const ConfigKey* find_config_key(std::string_view section, std::string_view key) {
    for (const auto& k : config_schema())
        if (section == k.section && key == k.key) return &k;
    return nullptr;
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            std::string part = trim(s.substr(start, i - start));
            if (!part.empty()) out.push_back(std::move(part));
            start = i + 1;
        }
    }
    return out;
}

inline std::optional<double> plain_number(const std::string& s) {
    if (s == "pi") return std::numbers::pi;
    if (s == "inf" || s == "infinite") return std::numeric_limits<double>::infinity();
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

/// Number with optional '*' and '/' factors, each a literal or `pi`.
inline std::optional<double> parse_number(std::string_view text) {
    const std::string s = detail::trim(text);
    if (s.empty()) return std::nullopt;
    double acc = 1.0;
    char op = '*';
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] != '*' && s[i] != '/') continue;
        const auto v = detail::plain_number(detail::trim(std::string_view(s).substr(start, i - start)));
        if (!v) return std::nullopt;
        acc = (op == '*') ? acc * *v : acc / *v;
        if (i < s.size()) op = s[i];
        start = i + 1;
    }
    return acc;
}

/// Flat sectioned key = value configuration. Keys are addressed as
/// "section.key"; unset keys fall back to the schema default.
class Config {
public:
    Config() = default;

    static Config from_text(std::string_view text, const std::string& source = "config") {
        Config c;
        c.merge(text, source);
        return c;
    }

    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config", "cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return from_text(buf.str(), path);
    }

    void merge(std::string_view text, const std::string& source = "config") {
        std::string section;
        int line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            const std::string s = detail::trim(std::string_view(line).substr(0, hash));
            if (s.empty()) continue;
            const std::string where = source + ":" + std::to_string(line_no);
            if (s.front() == '[') {
                if (s.back() != ']') throw ConfigError(s, "malformed section header at " + where);
                section = detail::trim(std::string_view(s).substr(1, s.size() - 2));
                bool known = false;
                for (const auto& k : config_schema()) known = known || section == k.section;
                if (!known) throw ConfigError("[" + section + "]", "unknown section at " + where);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(s, "expected 'key = value' at " + where);
            const std::string key = detail::trim(std::string_view(s).substr(0, eq));
            if (section.empty()) throw ConfigError(key, "key outside any [section] at " + where);
            set(section + "." + key, detail::trim(std::string_view(s).substr(eq + 1)));
        }
    }

    void set(const std::string& dotted, const std::string& value) {
        const auto dot = dotted.find('.');
        if (dot == std::string::npos || !find_config_key(dotted.substr(0, dot), dotted.substr(dot + 1))) {
            throw ConfigError(dotted, "unknown configuration key");
        }
        values_[dotted] = value;
    }

    std::string text(const std::string& dotted) const {
        if (auto it = values_.find(dotted); it != values_.end()) return it->second;
        const auto dot = dotted.find('.');
        const ConfigKey* k = dot == std::string::npos ? nullptr
                                                      : find_config_key(dotted.substr(0, dot), dotted.substr(dot + 1));
        if (!k) throw ConfigError(dotted, "unknown configuration key");
        return k->fallback;
    }

    bool empty(const std::string& dotted) const { return text(dotted).empty(); }

    double number(const std::string& dotted) const {
        const std::string v = text(dotted);
        const auto x = parse_number(v);
        if (!x) throw ConfigError(dotted, "expected a number, got '" + v + "'");
        return *x;
    }

    int integer(const std::string& dotted) const {
        const double x = number(dotted);
        if (!std::isfinite(x) || x != std::floor(x) || std::abs(x) > 2e9) {
            throw ConfigError(dotted, "expected an integer, got '" + text(dotted) + "'");
        }
        return static_cast<int>(x);
    }

    bool flag(const std::string& dotted) const {
        const std::string v = text(dotted);
        if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
        if (v == "false" || v == "no" || v == "0" || v == "off") return false;
        throw ConfigError(dotted, "expected true or false, got '" + v + "'");
    }

    std::vector<int> integers(const std::string& dotted) const {
        std::vector<int> out;
        for (const auto& item : detail::split(text(dotted), ',')) {
            const auto x = parse_number(item);
            if (!x || *x != std::floor(*x) || *x < 1 || *x > 2e9) {
                throw ConfigError(dotted, "expected a list of positive integers, got '" + text(dotted) + "'");
            }
            out.push_back(static_cast<int>(*x));
        }
        if (out.empty()) throw ConfigError(dotted, "list is empty");
        return out;
    }

    std::string choice(const std::string& dotted, std::initializer_list<const char*> allowed) const {
        const std::string v = text(dotted);
        for (const char* a : allowed)
            if (v == a) return v;
        std::string msg = "expected one of";
        for (const char* a : allowed) msg += std::string(" ") + a;
        throw ConfigError(dotted, msg + ", got '" + v + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

/// Annotated defaults, itself a valid config file.
inline std::string defaults_text() {
    std::ostringstream out;
    std::string section;
    for (const auto& k : config_schema()) {
        if (section != k.section) {
            if (!section.empty()) out << "\n";
            section = k.section;
            out << "[" << section << "]\n";
        }
        out << k.key << " = " << k.fallback << "    # " << k.doc << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Presets

inline const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table = {
        {"paper-state1",
         "[state]\nkind = superposition\nterms = 1 1 0; 2 1 0\n"
         "[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
        {"paper-state2",
         "[state]\nkind = superposition\nterms = 1 1 0; 2 0.70710678118654752 0.70710678118654752\n"
         "[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
        {"paper-coherent",
         "[state]\nkind = coherent\nalpha_abs = 0.7\nalpha_arg = pi/3\n"
         "[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"
         "[spectral]\npopulation_floor = 1e-5\n"},
        {"fock0", "[state]\nkind = fock\nn = 0\n[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
        {"fock1", "[state]\nkind = fock\nn = 1\n[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
        {"fock2", "[state]\nkind = fock\nn = 2\n[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
        {"paper-fig6-top",
         "[state]\nkind = fock\nn = 1\n"
         "[plan]\naxes = z\nsweep_n_m = 10, 1000\nsweep_n_t = 512\nsweep_total_time = 20*pi\nsweep_seeds = 1\n"
         "[spectral]\nlevels = 1\n"},
        {"paper-fig6-left",
         "[state]\nkind = fock\nn = 1\n"
         "[plan]\naxes = z\nsweep_n_m = 10, 30, 100, 300, 1000\nsweep_n_t = 128, 1024\nsweep_total_time = 20*pi\n"
         "sweep_seeds = 20\n"
         "[spectral]\nlevels = 1\n"},
        {"paper-fig6-right",
         "[state]\nkind = fock\nn = 1\n"
         "[plan]\naxes = z\ndelta_t = 0.075\nsweep_n_m = 1000\nsweep_n_t = 128, 256, 512, 1024, 2048, 4096\n"
         "sweep_seeds = 20\n"
         "[spectral]\nlevels = 1\nhalf_width = 1\n"},
        {"paper-dce",
         "[dce]\nomega = 1\ng_over_omega = 0.5\ntau = auto\ncutoff = 31\npopulation_floor = 1e-5\n"
         "[plan]\ndelta_t = 0.075\nn_t = 4096\nn_m = inf\n"},
    };
    return table;
}

inline Config preset_config(const std::string& name) {
    const auto it = presets().find(name);
    if (it == presets().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
    return Config::from_text(it->second, "preset " + name);
}

// ---------------------------------------------------------------------------
// Builders

inline bool rabi_units(const Config& c) { return c.choice("probe.units", {"rabi", "absolute"}) == "rabi"; }

/// Time scale factor: config time value -> absolute time.
inline double time_unit(const Config& c) { return rabi_units(c) ? 1.0 / c.number("probe.g") : 1.0; }

inline ProbeConfig probe_from_config(const Config& c) {
    ProbeConfig p;
    p.coupling = c.number("probe.g");
    if (!(p.coupling > 0.0) || !std::isfinite(p.coupling)) throw ConfigError("probe.g", "must be finite and > 0");
    p.cutoff = c.integer("state.cutoff");
    return p;
}

inline FieldState state_from_config(const Config& c) {
    const std::string kind = c.choice("state.kind", {"fock", "superposition", "coherent", "file"});
    const int cutoff = c.integer("state.cutoff");
    if (cutoff < 1) throw ConfigError("state.cutoff", "must be >= 1");
    if (kind == "fock") return fock_state(c.integer("state.n"), cutoff);
    if (kind == "coherent") {
        const complex alpha = std::polar(c.number("state.alpha_abs"), c.number("state.alpha_arg"));
        return coherent_state(alpha, cutoff);
    }
    if (kind == "file") {
        if (c.empty("state.file")) throw ConfigError("state.file", "kind = file needs a path");
        return load_amplitude_file(c.text("state.file"), cutoff);
    }
    std::vector<FockTerm> terms;
    for (const auto& item : detail::split(c.text("state.terms"), ';')) {
        std::istringstream in(item);
        std::string n, re, im;
        in >> n >> re >> im;
        std::string extra;
        const auto pn = parse_number(n), pr = parse_number(re), pi = parse_number(im);
        if (!pn || !pr || !pi || (in >> extra) || *pn != std::floor(*pn)) {
            throw ConfigError("state.terms", "expected 'n re im' entries, got '" + item + "'");
        }
        terms.push_back({static_cast<int>(*pn), complex(*pr, *pi)});
    }
    if (terms.empty()) throw ConfigError("state.terms", "kind = superposition needs terms");
    return superposition(terms, cutoff);
}

inline std::uint64_t parse_seed(const std::string& text, const std::string& key) {
    const bool digits = !text.empty() && text.size() <= 20 &&
                        std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isdigit(ch); });
    errno = 0;
    const unsigned long long v = digits ? std::strtoull(text.c_str(), nullptr, 10) : 0;
    if (!digits || errno == ERANGE) throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + text + "'");
    return v;
}

inline MeasurementPlan plan_from_config(const Config& c) {
    const double tu = time_unit(c);
    MeasurementPlan p;
    p.delta_t = c.number("plan.delta_t") * tu;
    p.n_t = c.integer("plan.n_t");
    const double nm = c.number("plan.n_m");
    if (std::isinf(nm)) p.shots.reset();
    else if (nm != std::floor(nm) || nm < 1 || nm > 2e9) throw ConfigError("plan.n_m", "expected a positive integer or inf");
    else p.shots = static_cast<int>(nm);
    const std::string axes = c.text("plan.axes");
    p.axes = {false, false, false};
    for (char ch : axes) {
        if (ch == 'x') p.axes[0] = true;
        else if (ch == 'y') p.axes[1] = true;
        else if (ch == 'z') p.axes[2] = true;
        else throw ConfigError("plan.axes", "expected letters from xyz, got '" + axes + "'");
    }
    p.gamma = c.number("plan.gamma") / tu;
    if (!c.empty("plan.gamma_x") || !c.empty("plan.gamma_y") || !c.empty("plan.gamma_z")) {
        std::array<double, 3> g{};
        const char* keys[3] = {"plan.gamma_x", "plan.gamma_y", "plan.gamma_z"};
        for (int i = 0; i < 3; ++i) g[i] = (c.empty(keys[i]) ? c.number("plan.gamma") : c.number(keys[i])) / tu;
        p.axis_gamma = g;
    }
    p.seed = parse_seed(c.text("plan.seed"), "plan.seed");
    try {
        p.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("plan", e.what());
    }
    return p;
}

inline AnalysisSettings analysis_from_config(const Config& c) {
    AnalysisSettings s;
    s.half_width = c.integer("spectral.half_width");
    s.levels = c.integer("spectral.levels");
    s.population_floor = c.number("spectral.population_floor");
    s.trace_tolerance = c.number("spectral.trace_tolerance");
    s.weighting = c.choice("spectral.weighting", {"equal", "snr"}) == "snr" ? BandWeighting::snr : BandWeighting::equal;
    s.decay_model = c.number("spectral.decay_model") / time_unit(c);
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("spectral", e.what());
    }
    return s;
}

inline CouplingSearch search_from_config(const Config& c) {
    CouplingSearch s;
    s.g_min = c.number("spectral.g_min");
    s.g_max = c.number("spectral.g_max");
    s.grid = c.integer("spectral.g_grid");
    s.levels = c.integer("spectral.levels");
    s.half_width = c.integer("spectral.half_width");
    if (!(s.g_min > 0.0) || !(s.g_max > s.g_min)) throw ConfigError("spectral.g_max", "need 0 < g_min < g_max");
    if (s.grid < 3) throw ConfigError("spectral.g_grid", "need >= 3 grid points");
    return s;
}

struct SweepPlan {
    std::vector<int> n_m;
    std::vector<int> n_t;
    std::optional<double> total_time;  // absolute
    double delta_t = 0.075;            // absolute, used when total_time is unset
    int seeds = 20;
};

inline SweepPlan sweep_from_config(const Config& c) {
    SweepPlan s;
    s.n_m = c.integers("plan.sweep_n_m");
    s.n_t = c.integers("plan.sweep_n_t");
    if (!c.empty("plan.sweep_total_time")) s.total_time = c.number("plan.sweep_total_time") * time_unit(c);
    s.delta_t = c.number("plan.delta_t") * time_unit(c);
    s.seeds = c.integer("plan.sweep_seeds");
    if (s.seeds < 1) throw ConfigError("plan.sweep_seeds", "must be >= 1");
    return s;
}

inline std::vector<DceConfig> dce_points_from_config(const Config& c) {
    DceConfig base;
    base.omega = c.number("dce.omega");
    base.cutoff = c.integer("dce.cutoff");
    base.dt_int = c.number("dce.dt_int");
    base.frame = c.choice("dce.frame", {"interaction", "lab"}) == "lab" ? Frame::lab : Frame::interaction;

    auto make = [&](double ratio, const std::string& tau_text, const std::string& key) {
        DceConfig d = base;
        d.g_over_omega = ratio;
        if (tau_text == "auto") {
            d.tau = std::numbers::pi / (2.0 * d.coupling());
        } else {
            const auto t = parse_number(tau_text);
            if (!t) throw ConfigError(key, "tau must be a number or auto, got '" + tau_text + "'");
            d.tau = *t;
        }
        try {
            d.validate();
        } catch (const ValidationError& e) {
            throw ConfigError(key, e.what());
        }
        return d;
    };

    std::vector<DceConfig> out;
    if (c.empty("dce.points")) {
        out.push_back(make(c.number("dce.g_over_omega"), c.text("dce.tau"), "dce.tau"));
        return out;
    }
    for (const auto& item : detail::split(c.text("dce.points"), ';')) {
        std::istringstream in(item);
        std::string r, t, extra;
        in >> r >> t;
        const auto ratio = parse_number(r);
        if (!ratio || t.empty() || (in >> extra)) {
            throw ConfigError("dce.points", "expected 'g_over_omega tau' entries, got '" + item + "'");
        }
        out.push_back(make(*ratio, t, "dce.points"));
    }
    return out;
}

} // namespace probetomo

#endif
