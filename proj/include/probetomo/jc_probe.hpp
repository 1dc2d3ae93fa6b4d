#ifndef PROBETOMO_JC_PROBE_HPP
#define PROBETOMO_JC_PROBE_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "fock_core.hpp"

namespace probetomo {

/// Resonant Jaynes-Cummings probe with real coupling. Time is measured in the
/// same units as 1/coupling; the mode frequency is carried for bookkeeping only.
struct ProbeConfig {
    double coupling = 1.0;
    double mode_frequency = 1.0;
    int cutoff = 31;

    void validate() const {
        if (!(coupling > 0.0)) throw ValidationError("jc_probe", "coupling g must be > 0");
        if (cutoff < 1) throw ValidationError("jc_probe", "cutoff must be >= 1");
    }
};

enum class Axis : int { x = 0, y = 1, z = 2 };

inline const char* axis_name(Axis a) {
    switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    default: return "z";
    }
}

enum class TrajectoryKind { ideal, sampled };

struct BlochTrajectory {
    std::vector<double> times;
    std::array<std::vector<double>, 3> coords;  // indexed by Axis; empty when not recorded
    TrajectoryKind kind = TrajectoryKind::ideal;
    double delta_t = 0.0;
    double coupling = 0.0;

    std::size_t size() const { return times.size(); }
    bool has(Axis a) const { return !coords[int(a)].empty(); }
    const std::vector<double>& operator[](Axis a) const { return coords[int(a)]; }
    std::vector<double>& operator[](Axis a) { return coords[int(a)]; }
};

/// Stroboscopic grid t_k = k dt, k = 1..n.
inline std::vector<double> uniform_grid(double dt, int n) {
    if (!(dt > 0.0) || n < 1) throw ValidationError("jc_probe", "grid needs dt > 0 and n >= 1");
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = (k + 1) * dt;
    return t;
}

inline double rabi_frequency(int n, double g) { return g * std::sqrt(double(n)); }

/// Reduced probe state after time t with the probe starting in |g>, built
/// from the block-diagonal propagator. Basis order (g, e).
inline Eigen::Matrix2cd evolve_joint(const DensityMatrix& rho, const ProbeConfig& cfg, double t) {
    const int nmax = rho.cutoff();
    double gg = rho.population(0);
    complex ge = rho.coherence(0) * std::sin(rabi_frequency(1, cfg.coupling) * t);
    for (int n = 1; n <= nmax; ++n) {
        const double c = std::cos(rabi_frequency(n, cfg.coupling) * t);
        gg += rho.population(n) * c * c;
        if (n < nmax) ge += rho.coherence(n) * c * std::sin(rabi_frequency(n + 1, cfg.coupling) * t);
    }
    ge *= complex(0.0, 1.0);
    Eigen::Matrix2cd q;
    q << gg, ge, std::conj(ge), 1.0 - gg;
    return q;
}

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// rho_gg = (1+z)/2, rho_ge = (x - i y)/2.
inline BlochVector bloch_from_qubit(const Eigen::Matrix2cd& q) {
    return {2.0 * q(0, 1).real(), -2.0 * q(0, 1).imag(), 2.0 * q(0, 0).real() - 1.0};
}

namespace detail {

struct ProbeTerms {
    // z: constant + sum_n pop_n cos(2 Omega_n t)
    double dc = 0.0;
    std::vector<std::pair<double, double>> z_cos;  // (frequency, weight)
    // x, y: sum of (frequency, weight) sine components
    std::vector<std::pair<double, double>> x_sin, y_sin;
};

inline ProbeTerms probe_terms(const DensityMatrix& rho, double g, double skip = 1e-14) {
    ProbeTerms terms;
    const int nmax = rho.cutoff();
    terms.dc = rho.population(0);
    for (int n = 1; n <= nmax; ++n) {
        if (std::abs(rho.population(n)) >= skip) terms.z_cos.emplace_back(2.0 * rabi_frequency(n, g), rho.population(n));
    }
    const complex c01 = rho.coherence(0);
    const double w1 = rabi_frequency(1, g);
    if (std::abs(c01.imag()) >= skip) terms.x_sin.emplace_back(w1, -2.0 * c01.imag());
    if (std::abs(c01.real()) >= skip) terms.y_sin.emplace_back(w1, -2.0 * c01.real());
    for (int n = 1; n < nmax; ++n) {
        const complex c = rho.coherence(n);
        const double hi = rabi_frequency(n + 1, g), lo = rabi_frequency(n, g);
        if (std::abs(c.imag()) >= skip) {
            terms.x_sin.emplace_back(hi + lo, -c.imag());
            terms.x_sin.emplace_back(hi - lo, -c.imag());
        }
        if (std::abs(c.real()) >= skip) {
            terms.y_sin.emplace_back(hi + lo, -c.real());
            terms.y_sin.emplace_back(hi - lo, -c.real());
        }
    }
    return terms;
}

} // namespace detail

/// Closed-form probe polarization for the target field state rho:
///   z(t) = rho_00 + sum_n rho_nn cos(2 Omega_n t)
///   x(t) = -[2 Im rho_01 sin(Omega_1 t) + sum_n Im rho_{n,n+1} (sin((Omega_{n+1}+Omega_n) t) + sin((Omega_{n+1}-Omega_n) t))]
///   y(t) = same with Re rho_{n,n+1}
/// Only populated terms are evaluated.
inline BlochTrajectory ideal_bloch_trajectory(const DensityMatrix& rho, const ProbeConfig& cfg,
                                              std::span<const double> times,
                                              std::array<bool, 3> axes = {true, true, true}) {
    cfg.validate();
    if (times.empty()) throw ValidationError("jc_probe", "trajectory needs at least one time point");
    const auto terms = detail::probe_terms(rho, cfg.coupling);

    BlochTrajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.kind = TrajectoryKind::ideal;
    traj.delta_t = times.size() > 1 ? times[1] - times[0] : times[0];
    traj.coupling = cfg.coupling;

    const std::size_t n = times.size();
    auto eval_sin = [&](const std::vector<std::pair<double, double>>& comps) {
        std::vector<double> out(n, 0.0);
        for (auto [w, a] : comps)
            for (std::size_t k = 0; k < n; ++k) out[k] += a * std::sin(w * times[k]);
        return out;
    };
    if (axes[0]) traj[Axis::x] = eval_sin(terms.x_sin);
    if (axes[1]) traj[Axis::y] = eval_sin(terms.y_sin);
    if (axes[2]) {
        std::vector<double> z(n, terms.dc);
        for (auto [w, a] : terms.z_cos)
            for (std::size_t k = 0; k < n; ++k) z[k] += a * std::cos(w * times[k]);
        traj[Axis::z] = std::move(z);
    }
    return traj;
}

} // namespace probetomo

#endif
