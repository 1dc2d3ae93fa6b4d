// probetomo: command-line driver for qubit-probe field tomography.
//
//   probetomo reconstruct  --preset paper-state2 --out-dir out
//   probetomo noise-sweep  --preset paper-fig6-left
//   probetomo dce          --preset paper-dce
//   probetomo estimate-g   --config run.cfg
//   probetomo --print-defaults
//
// Exit codes: 0 ok, 2 config error, 3 physics/validation error,
// 4 resolvability (peak overlap) error. Errors go to stderr as JSON.

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "probetomo/config.hpp"
#include "probetomo/pipeline.hpp"
#include "probetomo/report.hpp"

namespace fs = std::filesystem;
using namespace probetomo;

namespace {

struct Options {
    std::string config;
    std::string preset;
    std::optional<std::string> seed;
    std::string out_dir = "probetomo-out";
    std::string state_file;
};

Config load_config(const Options& o) {
    Config c;
    if (!o.preset.empty()) c = preset_config(o.preset);
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("--config", "cannot open config file '" + o.config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        c.merge(buf.str(), o.config);
    }
    if (!o.state_file.empty()) {
        c.set("state.kind", "file");
        c.set("state.file", o.state_file);
    }
    if (o.seed) {
        parse_seed(*o.seed, "--seed");
        c.set("plan.seed", *o.seed);
    }
    return c;
}

fs::path prepare_out_dir(const Options& o) {
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec || !fs::is_directory(o.out_dir)) throw ConfigError("--out-dir", "cannot create '" + o.out_dir + "'");
    return fs::path(o.out_dir);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw ConfigError("--out-dir", "cannot write '" + p.string() + "'");
    return f;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << "\n"; }

int cmd_reconstruct(const Options& o) {
    const Config c = load_config(o);
    const FieldState target = state_from_config(c);
    const ProbeConfig probe = probe_from_config(c);
    const MeasurementPlan plan = plan_from_config(c);
    const AnalysisSettings settings = analysis_from_config(c);
    const fs::path dir = prepare_out_dir(o);

    const TomographyRun run = run_tomography(density_from_pure(target), probe, plan, settings);
    {
        auto f = open_out(dir / "trajectory.csv");
        write_trajectory_csv(f, run.trajectory);
    }
    for (const auto* s : {&run.x, &run.y, &run.z}) {
        if (!*s) continue;
        auto f = open_out(dir / (std::string("spectrum_") + axis_name((*s)->axis) + ".csv"));
        write_spectrum_csv(f, **s);
    }
    write_json(dir / "peaks.json", peaks_json(run.result.peaks));

    std::optional<double> fid;
    if (run.result.assembled) fid = embedded_fidelity(run.result.assembled->state, target);
    const json report = reconstruction_json(run.result, fid);
    write_json(dir / "reconstruction.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_noise_sweep(const Options& o) {
    const Config c = load_config(o);
    const DensityMatrix rho = density_from_pure(state_from_config(c));
    const ProbeConfig probe = probe_from_config(c);
    const MeasurementPlan base = plan_from_config(c);
    const AnalysisSettings settings = analysis_from_config(c);
    const SweepPlan sweep = sweep_from_config(c);
    const fs::path dir = prepare_out_dir(o);

    std::vector<NoisePoint> points;
    for (int n_t : sweep.n_t) {
        const double dt = sweep.total_time ? *sweep.total_time / n_t : sweep.delta_t;
        for (int n_m : sweep.n_m) points.push_back(noise_point(rho, probe, n_m, n_t, dt, sweep.seeds, base.seed, settings));
    }

    {
        auto f = open_out(dir / "noise_sweep.csv");
        f << "n_m,n_t,xi,snr\n";
        f.precision(17);
        for (const auto& p : points) f << p.n_m << "," << p.n_t << "," << p.xi << "," << p.snr << "\n";
    }

    // One regression per fixed N_t (xi vs N_m) and per fixed N_m (S/xi vs N_t).
    json slopes = json::object();
    json vs_nm = json::array(), vs_nt = json::array();
    for (int n_t : sweep.n_t) {
        std::vector<double> x, y;
        for (const auto& p : points)
            if (p.n_t == n_t) x.push_back(p.n_m), y.push_back(p.xi);
        if (x.size() >= 2) vs_nm.push_back({{"n_t", n_t}, {"slope_log_xi_vs_log_n_m", loglog_slope(x, y)}});
    }
    for (int n_m : sweep.n_m) {
        std::vector<double> x, y;
        for (const auto& p : points)
            if (p.n_m == n_m) x.push_back(p.n_t), y.push_back(p.snr);
        if (x.size() >= 2) vs_nt.push_back({{"n_m", n_m}, {"slope_log_snr_vs_log_n_t", loglog_slope(x, y)}});
    }
    slopes["xi_vs_n_m"] = vs_nm;
    slopes["snr_vs_n_t"] = vs_nt;
    slopes["seeds"] = sweep.seeds;
    write_json(dir / "noise_slopes.json", slopes);
    std::cout << slopes.dump(2) << "\n";
    return 0;
}

int cmd_dce(const Options& o) {
    const Config c = load_config(o);
    const ProbeConfig probe = probe_from_config(c);
    const MeasurementPlan plan = plan_from_config(c);
    AnalysisSettings settings = analysis_from_config(c);
    settings.population_floor = c.number("dce.population_floor");
    const bool chain = c.flag("dce.reconstruct");
    const bool rk4 = c.flag("dce.rk4_check");
    const fs::path dir = prepare_out_dir(o);

    json records = json::array();
    for (const DceConfig& d : dce_points_from_config(c)) {
        DceStudy st = run_dce_study(d, probe, plan, settings, chain);
        json rec = dce_point_json(d, st);
        if (rk4) {
            const double steps = d.tau / d.dt_int;
            if (steps > 1e7) {
                rec["warnings"].push_back({{"source", "dce"},
                                           {"message", "RK4 cross-check skipped: too many steps"},
                                           {"value", steps}});
            } else {
                const RabiTrajectory traj = integrate_rabi_rk4(d, d.dt_int);
                double drift = 0.0;
                for (double p : traj.parity) drift = std::max(drift, std::abs(p - traj.parity.front()));
                const double overlap = std::norm(traj.final_state.amplitudes().dot(st.joint.amplitudes()));
                rec["rk4_check"] = {{"fidelity_vs_exact", overlap}, {"max_parity_drift", drift}};
            }
        }
        records.push_back(rec);
    }
    write_json(dir / "dce.json", records);
    std::cout << records.dump(2) << "\n";
    return 0;
}

int cmd_estimate_g(const Options& o) {
    const Config c = load_config(o);
    const FieldState target = state_from_config(c);
    const ProbeConfig probe = probe_from_config(c);
    MeasurementPlan plan = plan_from_config(c);
    plan.axes = {false, false, true};
    const CouplingSearch search = search_from_config(c);
    const fs::path dir = prepare_out_dir(o);

    const BlochTrajectory traj = sample_trajectory(density_from_pure(target), probe, plan);
    const Spectrum z = dft(traj, Axis::z);
    const CouplingEstimate est = estimate_coupling(z, search);
    const json j = {{"g_estimate", est.g},
                    {"score", est.score},
                    {"peak", est.peak},
                    {"noise_floor", est.noise_floor},
                    {"resolution", std::numbers::pi / plan.total_time()},
                    {"g_true", probe.coupling}};
    write_json(dir / "estimate_g.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int report_error(const char* kind, const Error& e, int code, json extra = json::object()) {
    json j = {{"kind", kind}, {"module", e.module()}, {"message", e.what()}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cerr << json{{"error", j}}.dump() << "\n";
    return code;
}

int run(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        return report_error("config", e, 2, {{"key", e.key()}});
    } catch (const ResolvabilityError& e) {
        json coll = json::array();
        for (const auto& [a, b] : e.collisions()) coll.push_back({a, b});
        return report_error("resolvability", e, 4, {{"collisions", coll}});
    } catch (const Error& e) {
        return report_error("validation", e, 3);
    } catch (const std::exception& e) {
        return report_error("validation", Error("runtime", e.what()), 3);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit-probe tomography of a quantized field mode"};
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print every config key with its default and exit");

    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Config file (sections state, probe, plan, spectral, dce)");
        sub->add_option("--preset", opts.preset, "Named preset applied before --config");
        sub->add_option("--seed", opts.seed, "Override plan.seed");
        sub->add_option("--out-dir", opts.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--state-file", opts.state_file, "Amplitude list 'n re im' per line");
        sub->add_flag("--print-defaults", print_defaults, "Print every config key with its default and exit");
    };
    auto* rec = app.add_subcommand("reconstruct", "Simulate the probe and reconstruct the field state");
    auto* sweep = app.add_subcommand("noise-sweep", "Shot-noise scaling study");
    auto* dce = app.add_subcommand("dce", "Rabi-model field states and their reconstruction");
    auto* est = app.add_subcommand("estimate-g", "Estimate the coupling from the z spectrum");
    for (auto* s : {rec, sweep, dce, est}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", {{"kind", "config"}, {"module", "cli"}, {"key", "argv"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 2;
    }

    if (print_defaults) {
        std::cout << defaults_text() << "\n# presets:";
        for (const auto& [name, text] : presets()) std::cout << " " << name;
        std::cout << "\n";
        return 0;
    }
    if (*rec) return run([&] { return cmd_reconstruct(opts); });
    if (*sweep) return run([&] { return cmd_noise_sweep(opts); });
    if (*dce) return run([&] { return cmd_dce(opts); });
    if (*est) return run([&] { return cmd_estimate_g(opts); });
    std::cout << app.help() << "\n";
    return 0;
}
