#ifndef PROBETOMO_PIPELINE_HPP
#define PROBETOMO_PIPELINE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dce.hpp"
#include "measurement.hpp"
#include "reconstruct.hpp"

namespace probetomo {

/// generate -> sample -> DFT -> reconstruct for one target state.
struct TomographyRun {
    BlochTrajectory trajectory;
    std::optional<Spectrum> x, y, z;
    ReconstructionResult result;
};

inline TomographyRun run_tomography(const DensityMatrix& rho, const ProbeConfig& probe, const MeasurementPlan& plan,
                                    const AnalysisSettings& settings) {
    if (!plan.axes[int(Axis::z)]) throw ValidationError("pipeline", "reconstruction needs the z axis");
    TomographyRun run;
    run.trajectory = sample_trajectory(rho, probe, plan);
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
        if (!run.trajectory.has(a)) continue;
        Spectrum s = dft(run.trajectory, a);
        if (a == Axis::x) run.x = std::move(s);
        else if (a == Axis::y) run.y = std::move(s);
        else run.z = std::move(s);
    }
    const bool coherences = run.x && run.y;
    run.result = reconstruct(coherences ? &*run.x : nullptr, coherences ? &*run.y : nullptr, *run.z, probe.coupling,
                             settings);
    return run;
}

/// Fidelity of a reconstructed (possibly shorter) state against a reference,
/// both embedded at the larger cutoff.
inline double embedded_fidelity(const FieldState& a, const FieldState& b) {
    const int cut = std::max(a.cutoff(), b.cutoff());
    return fidelity(with_cutoff(a, cut), with_cutoff(b, cut));
}

// ---------------------------------------------------------------------------
// Shot-noise scaling

struct NoisePoint {
    int n_m = 0;
    int n_t = 0;
    double delta_t = 0.0;
    double xi = 0.0;      // mean residual noise floor over seeds
    double signal = 0.0;  // mean strongest population-peak estimate over seeds
    double snr = 0.0;     // signal / xi
};

/// z-only sampling of rho at (n_m, n_t, delta_t), averaged over `seeds`
/// independent runs starting at `base_seed`.
inline NoisePoint noise_point(const DensityMatrix& rho, const ProbeConfig& probe, int n_m, int n_t, double delta_t,
                              int seeds, std::uint64_t base_seed, const AnalysisSettings& settings) {
    if (seeds < 1) throw ValidationError("pipeline", "noise study needs >= 1 seed");
    NoisePoint pt{n_m, n_t, delta_t, 0.0, 0.0, 0.0};
    for (int i = 0; i < seeds; ++i) {
        MeasurementPlan plan;
        plan.delta_t = delta_t;
        plan.n_t = n_t;
        plan.shots = n_m;
        plan.axes = {false, false, true};
        plan.seed = base_seed + 0x9E3779B97F4A7C15ull * std::uint64_t(i);
        const BlochTrajectory traj = sample_trajectory(rho, probe, plan);
        const Spectrum z = dft(traj, Axis::z);
        const PopulationEstimate est = populations_from_z(z, probe.coupling, settings);
        double sig = 0.0;
        for (std::size_t n = 1; n < est.raw.size(); ++n) sig = std::max(sig, std::abs(est.raw[n]));
        pt.xi += est.noise_floor / seeds;
        pt.signal += sig / seeds;
    }
    pt.snr = pt.xi > 0.0 ? pt.signal / pt.xi : 0.0;
    return pt;
}

/// Least-squares slope of log10(y) against log10(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("pipeline", "slope needs >= 2 points");
    double mx = 0.0, my = 0.0;
    const double n = double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log10(x[i]) / n;
        my += std::log10(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log10(x[i]) - mx;
        sxy += dx * (std::log10(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ValidationError("pipeline", "slope needs distinct x values");
    return sxy / sxx;
}

// ---------------------------------------------------------------------------
// DCE chain: generate, condition in the +- basis, reconstruct phi_+-,
// recombine, compare with the directly computed phi_g, phi_e.

struct DceStudy {
    JointState joint;
    ConditionalPair pair;
    double mean_photons = 0.0;
    double leakage = 0.0;
    double parity = 0.0;
    std::optional<FieldState> phi_plus_hat, phi_minus_hat;
    std::optional<Recombined> recombined;
    std::optional<double> fidelity_g, fidelity_e;
    std::vector<Warning> warnings;
};

inline DceStudy run_dce_study(const DceConfig& cfg, const ProbeConfig& probe, const MeasurementPlan& plan,
                              const AnalysisSettings& settings, bool reconstruct_states = true) {
    DceStudy st{evolve_rabi(cfg), {}, 0.0, 0.0, 0.0, {}, {}, {}, {}, {}, {}};
    st.pair = condition_on_qubit(st.joint, QubitBasis::pm);
    st.leakage = st.joint.edge_weight();
    st.parity = parity_expectation(st.joint);
    {
        const DensityMatrix rho = unconditional_mixture(st.pair);
        double n = 0.0;
        for (int k = 0; k <= rho.cutoff(); ++k) n += k * rho.population(k);
        st.mean_photons = n;
    }
    if (!st.pair.phi_g) st.warnings.push_back({"dce", "degenerate branch: phi_g undetermined (|c_g| < 1e-8)", st.pair.c_g});
    if (!st.pair.phi_e) st.warnings.push_back({"dce", "degenerate branch: phi_e undetermined (|c_e| < 1e-8)", st.pair.c_e});
    if (!reconstruct_states) return st;

    ProbeConfig pc = probe;
    pc.cutoff = cfg.cutoff;
    auto tomo = [&](const FieldState& s) {
        const TomographyRun run = run_tomography(density_from_pure(s), pc, plan, settings);
        for (const auto& w : run.result.warnings) st.warnings.push_back(w);
        return with_cutoff(run.result.assembled->state, cfg.cutoff);
    };
    st.phi_plus_hat = tomo(*st.pair.phi_plus);
    st.phi_minus_hat = tomo(*st.pair.phi_minus);
    st.recombined = recombine(*st.phi_plus_hat, *st.phi_minus_hat);
    if (st.recombined->phi_g && st.pair.phi_g) st.fidelity_g = fidelity(*st.recombined->phi_g, *st.pair.phi_g);
    else st.warnings.push_back({"dce", "degenerate branch: reconstructed phi_g undetermined", st.recombined->c_g});
    if (st.recombined->phi_e && st.pair.phi_e) st.fidelity_e = fidelity(*st.recombined->phi_e, *st.pair.phi_e);
    else st.warnings.push_back({"dce", "degenerate branch: reconstructed phi_e undetermined", st.recombined->c_e});
    return st;
}

} // namespace probetomo

#endif
