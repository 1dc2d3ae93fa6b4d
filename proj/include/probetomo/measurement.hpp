#ifndef PROBETOMO_MEASUREMENT_HPP
#define PROBETOMO_MEASUREMENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "jc_probe.hpp"

namespace probetomo {

/// Stroboscopic measurement schedule. `shots == nullopt` means the ideal
/// (infinitely many shots) limit.
struct MeasurementPlan {
    double delta_t = 0.075;
    int n_t = 4096;
    std::optional<int> shots;
    std::array<bool, 3> axes = {true, true, true};
    double gamma = 0.0;
    std::optional<std::array<double, 3>> axis_gamma;  // per-axis override of gamma
    std::uint64_t seed = 1;

    double total_time() const { return n_t * delta_t; }
    double decay_rate(Axis a) const { return axis_gamma ? (*axis_gamma)[int(a)] : gamma; }

    void validate() const {
        if (!(delta_t > 0.0)) throw ValidationError("measurement", "delta_t must be > 0");
        if (n_t < 1) throw ValidationError("measurement", "n_t must be >= 1");
        if (shots && *shots < 1) throw ValidationError("measurement", "n_m must be >= 1 or infinite");
        if (gamma < 0.0) throw ValidationError("measurement", "gamma must be >= 0");
        if (axis_gamma) {
            for (double gm : *axis_gamma)
                if (gm < 0.0) throw ValidationError("measurement", "per-axis gamma must be >= 0");
        }
    }
};

inline double decohered_expectation(double ideal, double gamma, double t) { return ideal * std::exp(-gamma * t); }

namespace detail {

/// Independent engine for one (axis, time index) cell of the schedule.
inline std::mt19937_64 cell_engine(std::uint64_t seed, Axis axis, std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(axis), static_cast<std::uint32_t>(k & 0xffffffffu),
                      static_cast<std::uint32_t>(std::uint64_t(k) >> 32)};
    return std::mt19937_64(seq);
}

/// Mean of `shots` outcomes in {+1,-1} with P(+1) = (1+m)/2. A draw is +1 when
/// the raw 64-bit engine output falls below P(+1)*2^64.
inline double sample_polarization(std::mt19937_64& eng, double m, int shots) {
    const double p_up = std::clamp(0.5 * (1.0 + m), 0.0, 1.0);
    if (p_up >= 1.0) return 1.0;
    if (p_up <= 0.0) return -1.0;
    const auto threshold = static_cast<std::uint64_t>(std::ldexp(p_up, 64));
    long ups = 0;
    for (int i = 0; i < shots; ++i) ups += eng() < threshold ? 1 : 0;
    return (2.0 * double(ups) - shots) / shots;
}

} // namespace detail

/// Finite-shot polarization record for every t_k = k dt and requested axis.
/// Deterministic in (rho, cfg, plan); each (axis, k) cell owns its random
/// stream, so the evaluation order cannot change the result.
inline BlochTrajectory sample_trajectory(const DensityMatrix& rho, const ProbeConfig& cfg,
                                         const MeasurementPlan& plan) {
    plan.validate();
    const auto times = uniform_grid(plan.delta_t, plan.n_t);
    BlochTrajectory traj = ideal_bloch_trajectory(rho, cfg, times, plan.axes);
    traj.kind = plan.shots ? TrajectoryKind::sampled : TrajectoryKind::ideal;
    traj.delta_t = plan.delta_t;

    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
        if (!traj.has(a)) continue;
        auto& series = traj[a];
        const double gm = plan.decay_rate(a);
        for (std::size_t k = 0; k < series.size(); ++k) {
            double m = gm > 0.0 ? decohered_expectation(series[k], gm, times[k]) : series[k];
            if (plan.shots) {
                auto eng = detail::cell_engine(plan.seed, a, k);
                m = detail::sample_polarization(eng, m, *plan.shots);
            }
            series[k] = m;
        }
    }
    return traj;
}

/// CSV `t,x,y,z`; axes that were not measured are left as empty fields.
inline void write_trajectory_csv(std::ostream& out, const BlochTrajectory& traj) {
    const auto old_prec = out.precision(17);
    out << "t,x,y,z\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << traj.times[k];
        for (Axis a : {Axis::x, Axis::y, Axis::z}) {
            out << ',';
            if (traj.has(a)) out << traj[a][k];
        }
        out << '\n';
    }
    out.precision(old_prec);
}

} // namespace probetomo

#endif
