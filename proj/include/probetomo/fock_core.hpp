#ifndef PROBETOMO_FOCK_CORE_HPP
#define PROBETOMO_FOCK_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace probetomo {

using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double default_leakage_threshold = 1e-8;

/// Pure state of one field mode, truncated to Fock levels 0..cutoff.
/// Amplitudes are not required to be normalized; generators return
/// normalized states and `normalized()` restores the unit norm.
class FieldState {
public:
    explicit FieldState(CVector amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2) {
            throw ValidationError("fock_core", "field state needs cutoff >= 1");
        }
    }

    int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
    int dimension() const { return static_cast<int>(amps_.size()); }
    const CVector& amplitudes() const { return amps_; }
    complex operator[](int n) const { return amps_(n); }

    double norm() const { return amps_.norm(); }

    FieldState normalized() const {
        const double nrm = norm();
        if (nrm == 0.0) {
            throw ValidationError("fock_core", "cannot normalize the zero vector");
        }
        return FieldState(amps_ / nrm);
    }

    /// Weight sitting in the highest retained level; a proxy for how much
    /// probability the truncation would lose under further dynamics.
    double edge_weight() const { return std::norm(amps_(cutoff())); }

    double mean_photon_number() const {
        double acc = 0.0;
        for (int n = 0; n <= cutoff(); ++n) acc += n * std::norm(amps_(n));
        return acc / amps_.squaredNorm();
    }

    /// Global phase rotated so the first nonzero amplitude is real positive.
    FieldState phase_fixed(double zero_tol = 1e-14) const {
        for (int n = 0; n <= cutoff(); ++n) {
            if (std::abs(amps_(n)) > zero_tol) {
                return FieldState(amps_ * std::polar(1.0, -std::arg(amps_(n))));
            }
        }
        return *this;
    }

private:
    CVector amps_;
};

/// Truncated field density matrix. Hermiticity holds exactly: the lower
/// triangle is always rebuilt from the upper one.
class DensityMatrix {
public:
    explicit DensityMatrix(const CMatrix& elements) : rho_(elements) {
        if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
            throw ValidationError("fock_core", "density matrix must be square with cutoff >= 1");
        }
        for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
            rho_(i, i) = complex(rho_(i, i).real(), 0.0);
            for (Eigen::Index j = i + 1; j < rho_.cols(); ++j) rho_(j, i) = std::conj(rho_(i, j));
        }
    }

    int cutoff() const { return static_cast<int>(rho_.rows()) - 1; }
    int dimension() const { return static_cast<int>(rho_.rows()); }
    const CMatrix& elements() const { return rho_; }
    complex operator()(int i, int j) const { return rho_(i, j); }

    double population(int n) const { return rho_(n, n).real(); }
    /// Superdiagonal element rho_{n,n+1}.
    complex coherence(int n) const { return rho_(n, n + 1); }

    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

    void validate(double trace_tol = 1e-10, double negativity_tol = 1e-12) const {
        if (std::abs(trace() - 1.0) > trace_tol) {
            throw ValidationError("fock_core", "density matrix trace deviates from 1 by " +
                                                   std::to_string(std::abs(trace() - 1.0)));
        }
        for (int n = 0; n <= cutoff(); ++n) {
            if (population(n) < -negativity_tol) {
                throw ValidationError("fock_core", "negative population at n=" + std::to_string(n));
            }
        }
    }

private:
    CMatrix rho_;
};

/// Qubit-field pure state in the interleaved basis |g,0>, |e,0>, |g,1>, |e,1>, ...
class JointState {
public:
    enum Qubit : int { ground = 0, excited = 1 };

    explicit JointState(CVector amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 4 || amps_.size() % 2 != 0) {
            throw ValidationError("fock_core", "joint state needs an even dimension >= 4");
        }
    }

    static int index(Qubit q, int n) { return 2 * n + q; }

    int cutoff() const { return static_cast<int>(amps_.size()) / 2 - 1; }
    const CVector& amplitudes() const { return amps_; }
    complex amplitude(Qubit q, int n) const { return amps_(index(q, n)); }
    double norm() const { return amps_.norm(); }

    /// Unnormalized field vector attached to qubit state q, i.e. c_q |phi_q>.
    CVector branch(Qubit q) const {
        CVector out(cutoff() + 1);
        for (int n = 0; n <= cutoff(); ++n) out(n) = amplitude(q, n);
        return out;
    }

    double edge_weight() const {
        return std::norm(amplitude(ground, cutoff())) + std::norm(amplitude(excited, cutoff()));
    }

private:
    CVector amps_;
};

inline FieldState fock_state(int n, int cutoff) {
    if (cutoff < 1) throw ValidationError("fock_core", "cutoff must be >= 1");
    if (n < 0 || n > cutoff) {
        throw ValidationError("fock_core", "cutoff violation: n=" + std::to_string(n) +
                                               " exceeds cutoff " + std::to_string(cutoff));
    }
    CVector v = CVector::Zero(cutoff + 1);
    v(n) = 1.0;
    return FieldState(std::move(v));
}

enum class Ladder { raise, lower };

/// a^dagger or a on a truncated state, without renormalization. Weight pushed
/// past the cutoff by `raise` is dropped and, above `threshold`, reported.
inline FieldState apply_ladder(const FieldState& state, Ladder which, std::vector<Warning>* warnings = nullptr,
                               double threshold = default_leakage_threshold) {
    const int nmax = state.cutoff();
    CVector out = CVector::Zero(nmax + 1);
    if (which == Ladder::raise) {
        for (int n = 0; n < nmax; ++n) out(n + 1) = std::sqrt(double(n + 1)) * state[n];
        const double lost = (nmax + 1.0) * std::norm(state[nmax]);
        if (lost > threshold && warnings) {
            warnings->push_back({"fock_core", "raising operator truncated weight at the cutoff", lost});
        }
    } else {
        for (int n = 1; n <= nmax; ++n) out(n - 1) = std::sqrt(double(n)) * state[n];
    }
    return FieldState(std::move(out));
}

inline DensityMatrix density_from_pure(const FieldState& state, double norm_tol = 1e-8) {
    if (std::abs(state.norm() - 1.0) > norm_tol) {
        throw ValidationError("fock_core", "density_from_pure needs a normalized state (norm " +
                                               std::to_string(state.norm()) + ")");
    }
    const CVector& c = state.amplitudes();
    return DensityMatrix(c * c.adjoint());
}

/// Convex combination sum_i w_i |psi_i><psi_i|; weights must sum to one.
inline DensityMatrix mixture(const std::vector<double>& weights, const std::vector<FieldState>& states) {
    if (weights.size() != states.size() || states.empty()) {
        throw ValidationError("fock_core", "mixture needs one weight per state");
    }
    const int dim = states.front().dimension();
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dimension() != dim) throw ValidationError("fock_core", "mixture: cutoff mismatch");
        const CVector& c = states[i].amplitudes();
        rho += weights[i] * (c * c.adjoint());
    }
    return DensityMatrix(rho);
}

inline double fidelity(const FieldState& a, const FieldState& b) {
    if (a.cutoff() != b.cutoff()) {
        throw ValidationError("fock_core", "fidelity: cutoff mismatch (" + std::to_string(a.cutoff()) + " vs " +
                                               std::to_string(b.cutoff()) + ")");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Same state embedded in a larger (or smaller) cutoff. Shrinking drops weight.
inline FieldState with_cutoff(const FieldState& s, int cutoff) {
    CVector v = CVector::Zero(cutoff + 1);
    const int keep = std::min(cutoff, s.cutoff());
    v.head(keep + 1) = s.amplitudes().head(keep + 1);
    return FieldState(std::move(v));
}

} // namespace probetomo

#endif
