#ifndef PROBETOMO_DCE_HPP
#define PROBETOMO_DCE_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fock_core.hpp"

namespace probetomo {

enum class Frame { lab, interaction };

/// Sudden-switch Rabi interaction: coupling g = g_over_omega * omega is on
/// for 0 <= t <= tau, resonant qubit (omega_a = omega), start in |g,0>.
struct DceConfig {
    double omega = 1.0;
    double g_over_omega = 0.5;
    double tau = std::numbers::pi;  // pi / (2 g) at the defaults
    int cutoff = 31;
    double dt_int = 1e-4 * 2.0 * std::numbers::pi;
    Frame frame = Frame::interaction;
    double leakage_threshold = default_leakage_threshold;
    double norm_tolerance = 1e-9;

    double coupling() const { return g_over_omega * omega; }

    void validate() const {
        if (!(omega > 0.0)) throw ValidationError("dce", "omega must be > 0");
        if (!(g_over_omega > 0.0)) throw ValidationError("dce", "g_over_omega must be > 0");
        if (!(tau > 0.0)) throw ValidationError("dce", "tau must be > 0");
        if (cutoff < 1) throw ValidationError("dce", "cutoff must be >= 1");
        if (!(dt_int > 0.0)) throw ValidationError("dce", "dt_int must be > 0");
    }
};

/// H = omega (a^dag a + 1/2) - (omega/2) sigma_z + g sigma_x (a + a^dag) on the
/// interleaved joint basis, sigma_z |g> = +|g>.
inline CMatrix rabi_hamiltonian(const DceConfig& cfg, bool coupled = true) {
    const int nmax = cfg.cutoff;
    const int dim = 2 * (nmax + 1);
    CMatrix h = CMatrix::Zero(dim, dim);
    for (int n = 0; n <= nmax; ++n) {
        const double field = cfg.omega * (n + 0.5);
        h(JointState::index(JointState::ground, n), JointState::index(JointState::ground, n)) = field - 0.5 * cfg.omega;
        h(JointState::index(JointState::excited, n), JointState::index(JointState::excited, n)) = field + 0.5 * cfg.omega;
    }
    if (!coupled) return h;
    const double g = cfg.coupling();
    for (int n = 0; n < nmax; ++n) {
        const double amp = g * std::sqrt(double(n + 1));
        // sigma_x couples g <-> e; (a + a^dag) couples n <-> n+1
        for (auto [q1, q2] : {std::pair{JointState::ground, JointState::excited},
                              std::pair{JointState::excited, JointState::ground}}) {
            const int i = JointState::index(q1, n), j = JointState::index(q2, n + 1);
            h(i, j) = amp;
            h(j, i) = amp;
        }
    }
    return h;
}

/// <sigma_z (-1)^{a^dag a}>.
inline double parity_expectation(const JointState& s) {
    double acc = 0.0;
    for (int n = 0; n <= s.cutoff(); ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        acc += sign * (std::norm(s.amplitude(JointState::ground, n)) - std::norm(s.amplitude(JointState::excited, n)));
    }
    return acc;
}

inline JointState ground_vacuum(int cutoff) {
    CVector v = CVector::Zero(2 * (cutoff + 1));
    v(0) = 1.0;
    return JointState(std::move(v));
}

namespace detail {

inline JointState to_frame(const CVector& lab, const DceConfig& cfg, double t) {
    if (cfg.frame == Frame::lab) return JointState(lab);
    const CMatrix h0 = rabi_hamiltonian(cfg, false);
    CVector out = lab;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= std::polar(1.0, h0(i, i).real() * t);
    return JointState(std::move(out));
}

inline void check_leakage(const JointState& s, const DceConfig& cfg) {
    if (s.edge_weight() > cfg.leakage_threshold) {
        throw ValidationError("dce", "cutoff leakage " + std::to_string(s.edge_weight()) +
                                         " exceeds threshold; raise the cutoff");
    }
}

} // namespace detail

/// Exact states at the given times in [0, tau], by eigendecomposition of the
/// (constant) coupled Hamiltonian. Returned in the configured frame.
inline std::vector<JointState> exact_rabi_states(const DceConfig& cfg, const std::vector<double>& times) {
    cfg.validate();
    const CMatrix h = rabi_hamiltonian(cfg);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    const CVector psi0 = ground_vacuum(cfg.cutoff).amplitudes();
    const CVector coeff0 = eig.eigenvectors().adjoint() * psi0;
    std::vector<JointState> out;
    out.reserve(times.size());
    for (double t : times) {
        CVector coeff = coeff0;
        for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) *= std::polar(1.0, -eig.eigenvalues()(i) * t);
        out.push_back(detail::to_frame(eig.eigenvectors() * coeff, cfg, t));
    }
    return out;
}

/// Joint state at tau, exact.
inline JointState evolve_rabi(const DceConfig& cfg) {
    JointState out = exact_rabi_states(cfg, {cfg.tau}).front();
    detail::check_leakage(out, cfg);
    return out;
}

struct RabiTrajectory {
    JointState final_state;  // in the configured frame
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> parity;
};

/// Fixed-step RK4 integration of i d/dt psi = H psi, sampling norm and parity
/// every `sample_every` steps. Independent of `evolve_rabi`.
inline RabiTrajectory integrate_rabi_rk4(const DceConfig& cfg, double dt, int sample_every = 100) {
    cfg.validate();
    const CMatrix h = rabi_hamiltonian(cfg);
    const complex mi(0.0, -1.0);
    const int steps = static_cast<int>(std::ceil(cfg.tau / dt - 1e-12));
    const double step = cfg.tau / steps;
    CVector psi = ground_vacuum(cfg.cutoff).amplitudes();

    RabiTrajectory traj{JointState(psi), {}, {}, {}};
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.norm.push_back(psi.norm());
        traj.parity.push_back(parity_expectation(JointState(psi)));
    };
    record(0.0);
    for (int i = 1; i <= steps; ++i) {
        const CVector k1 = mi * (h * psi);
        const CVector k2 = mi * (h * (psi + 0.5 * step * k1));
        const CVector k3 = mi * (h * (psi + 0.5 * step * k2));
        const CVector k4 = mi * (h * (psi + step * k3));
        psi += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (i % sample_every == 0 || i == steps) record(i * step);
    }
    for (double nrm : traj.norm) {
        if (std::abs(nrm - 1.0) > cfg.norm_tolerance) {
            throw ValidationError("dce", "integrator norm drift " + std::to_string(std::abs(nrm - 1.0)) +
                                             " exceeds tolerance; reduce dt_int");
        }
    }
    traj.final_state = detail::to_frame(psi, cfg, cfg.tau);
    detail::check_leakage(traj.final_state, cfg);
    return traj;
}

enum class QubitBasis { ge, pm };

/// Field states conditioned on a qubit measurement at tau.
/// ge: c_g |phi_g> and c_e |phi_e> with c_g, c_e >= 0 real (phases absorbed
/// into phi). pm: phi_+- = c_g phi_g +- c_e phi_e with probabilities p_+-.
struct ConditionalPair {
    double c_g = 0.0, c_e = 0.0;
    std::optional<FieldState> phi_g, phi_e;
    std::optional<FieldState> phi_plus, phi_minus;
    double p_g = 0.0, p_e = 0.0, p_plus = 0.0, p_minus = 0.0;
};

inline ConditionalPair condition_on_qubit(const JointState& joint, QubitBasis basis, double degenerate = 1e-8) {
    if (std::abs(joint.norm() - 1.0) > 1e-8) throw ValidationError("dce", "joint state is not normalized");
    const CVector bg = joint.branch(JointState::ground);
    const CVector be = joint.branch(JointState::excited);
    ConditionalPair pair;
    pair.c_g = bg.norm();
    pair.c_e = be.norm();
    pair.p_g = pair.c_g * pair.c_g;
    pair.p_e = pair.c_e * pair.c_e;
    if (pair.c_g > degenerate) pair.phi_g = FieldState(bg / pair.c_g);
    if (pair.c_e > degenerate) pair.phi_e = FieldState(be / pair.c_e);
    if (basis == QubitBasis::pm) {
        const CVector plus = bg + be, minus = bg - be;
        pair.p_plus = 0.5 * plus.squaredNorm();
        pair.p_minus = 0.5 * minus.squaredNorm();
        pair.phi_plus = FieldState(plus / plus.norm());
        pair.phi_minus = FieldState(minus / minus.norm());
    }
    return pair;
}

/// |c_g|^2 |phi_g><phi_g| + |c_e|^2 |phi_e><phi_e|.
inline DensityMatrix unconditional_mixture(const ConditionalPair& pair) {
    std::vector<double> w;
    std::vector<FieldState> s;
    if (pair.phi_g) {
        w.push_back(pair.p_g);
        s.push_back(*pair.phi_g);
    }
    if (pair.phi_e) {
        w.push_back(pair.p_e);
        s.push_back(*pair.phi_e);
    }
    const double total = pair.p_g * bool(pair.phi_g) + pair.p_e * bool(pair.phi_e);
    for (double& x : w) x /= total;
    return mixture(w, s);
}

/// phi_g = (phi_+ + phi_-) / (2 c_g), phi_e = (phi_+ - phi_-) / (2 c_e), with
/// c_g, c_e taken from the norms of the recombined vectors. Both inputs must
/// share one global-phase gauge. A branch with |c| below `degenerate` is
/// reported as undetermined.
struct Recombined {
    double c_g = 0.0, c_e = 0.0;
    std::optional<FieldState> phi_g, phi_e;
};

inline Recombined recombine(const FieldState& phi_plus, const FieldState& phi_minus, double degenerate = 1e-8) {
    if (phi_plus.cutoff() != phi_minus.cutoff()) throw ValidationError("dce", "recombine: cutoff mismatch");
    const CVector sum = 0.5 * (phi_plus.amplitudes() + phi_minus.amplitudes());
    const CVector diff = 0.5 * (phi_plus.amplitudes() - phi_minus.amplitudes());
    Recombined r;
    r.c_g = sum.norm();
    r.c_e = diff.norm();
    if (r.c_g > degenerate) r.phi_g = FieldState(sum / r.c_g);
    if (r.c_e > degenerate) r.phi_e = FieldState(diff / r.c_e);
    return r;
}

} // namespace probetomo

#endif
