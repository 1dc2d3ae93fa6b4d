#ifndef PROBETOMO_SPECTRAL_HPP
#define PROBETOMO_SPECTRAL_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "jc_probe.hpp"

namespace probetomo {

/// DFT of one Bloch coordinate sampled on t_k = t_0 + k dt, k = 0..N-1:
///   X_m = (1/N) sum_k s_k exp(-i omega_m t_k),  omega_m = 2 pi m / T,  T = N dt,
/// stored for signed m in ascending order. With this normalization a component
/// a cos(W t) shows up as delta weights a/2 at +-W.
struct Spectrum {
    Axis axis = Axis::z;
    int n = 0;
    double delta_t = 0.0;
    double t0 = 0.0;
    std::vector<double> omega;
    std::vector<complex> values;

    double total_time() const { return n * delta_t; }
    double bin_width() const { return 2.0 * std::numbers::pi / total_time(); }
    long min_bin() const { return -static_cast<long>(n / 2); }
    long max_bin() const { return static_cast<long>(n) - 1 - n / 2; }
    long nearest_bin(double w) const { return std::lround(w / bin_width()); }
    bool has_bin(long m) const { return m >= min_bin() && m <= max_bin(); }
    std::size_t index(long m) const { return static_cast<std::size_t>(m - min_bin()); }
    complex at_bin(long m) const { return values[index(m)]; }
    std::size_t size() const { return values.size(); }

    /// Exact DTFT of the underlying samples at an arbitrary frequency,
    /// interpolated from the DFT coefficients.
    complex evaluate(double w) const;
};

namespace detail {

/// exp(z) - 1 without cancellation for small z.
inline complex expm1(complex z) {
    const double a = z.real(), b = z.imag();
    const double s = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

} // namespace detail

/// Windowless grid response D(delta) = (1/N) sum_k exp((-decay - i delta) t_k)
/// for t_k = t0 + k dt, k = 0..N-1. The DFT bin m of exp(i W t) exp(-decay t)
/// equals D(omega_m - W).
inline complex dirichlet(double delta, int n, double dt, double t0, double decay = 0.0) {
    const complex lead = std::exp(complex(-decay * t0, -delta * t0));
    if (decay == 0.0) {
        const double theta = 0.5 * delta * dt;
        const double s = std::sin(theta);
        double ratio;
        if (std::abs(s) < 1e-9) {
            ratio = n * std::cos(n * theta) / std::cos(theta);
        } else {
            ratio = std::sin(n * theta) / s;
        }
        return lead * std::polar(ratio / n, -theta * (n - 1));
    }
    const complex z(-decay * dt, -delta * dt);
    return lead * detail::expm1(double(n) * z) / detail::expm1(z) / double(n);
}

inline complex Spectrum::evaluate(double w) const {
    complex acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * dirichlet(w - omega[i], n, delta_t, t0);
    return acc;
}

namespace detail {

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

struct FftwPlan {
    fftw_plan plan = nullptr;
    explicit FftwPlan(fftw_plan p) : plan(p) {}
    ~FftwPlan() {
        if (plan) fftw_destroy_plan(plan);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

} // namespace detail

inline void check_uniform_grid(std::span<const double> times, double rel_tol = 1e-9) {
    if (times.size() < 2) throw ValidationError("spectral", "DFT needs at least two time points");
    const double dt = (times.back() - times.front()) / double(times.size() - 1);
    if (!(dt > 0.0)) throw ValidationError("spectral", "time grid must be strictly increasing");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (std::abs(times[k] - times[k - 1] - dt) > rel_tol * dt * 10.0 + 1e-12 * std::abs(times[k])) {
            throw ValidationError("spectral", "time grid is not uniform at index " + std::to_string(k));
        }
    }
}

inline Spectrum dft(std::span<const double> signal, std::span<const double> times, Axis axis = Axis::z) {
    if (signal.size() != times.size()) throw ValidationError("spectral", "signal and time grid lengths differ");
    check_uniform_grid(times);

    Spectrum spec;
    spec.axis = axis;
    spec.n = static_cast<int>(signal.size());
    spec.delta_t = (times.back() - times.front()) / double(times.size() - 1);
    spec.t0 = times.front();

    const int n = spec.n;
    std::unique_ptr<fftw_complex, detail::FftwDeleter> buf(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
    detail::FftwPlan plan(fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    for (int k = 0; k < n; ++k) {
        buf.get()[k][0] = signal[k];
        buf.get()[k][1] = 0.0;
    }
    fftw_execute(plan.plan);

    spec.omega.resize(n);
    spec.values.resize(n);
    const double dw = spec.bin_width();
    for (long m = spec.min_bin(); m <= spec.max_bin(); ++m) {
        const long j = ((m % n) + n) % n;
        const std::size_t i = spec.index(m);
        spec.omega[i] = m * dw;
        const complex raw(buf.get()[j][0], buf.get()[j][1]);
        spec.values[i] = raw * std::polar(1.0 / n, -spec.omega[i] * spec.t0);
    }
    return spec;
}

/// Evaluates the DTFT of the samples behind a spectrum at arbitrary
/// frequencies. Samples are recovered once by an inverse FFT; each evaluation
/// is then a single O(N) phasor sweep.
class SpectrumInterpolator {
public:
    explicit SpectrumInterpolator(const Spectrum& spec) : n_(spec.n), dt_(spec.delta_t), t0_(spec.t0), samples_(spec.n) {
        std::unique_ptr<fftw_complex, detail::FftwDeleter> buf(
            static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_)));
        detail::FftwPlan plan(fftw_plan_dft_1d(n_, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
        for (long m = spec.min_bin(); m <= spec.max_bin(); ++m) {
            const long j = ((m % n_) + n_) % n_;
            const std::size_t i = spec.index(m);
            const complex v = spec.values[i] * std::polar(1.0, spec.omega[i] * t0_);
            buf.get()[j][0] = v.real();
            buf.get()[j][1] = v.imag();
        }
        fftw_execute(plan.plan);
        for (int k = 0; k < n_; ++k) samples_[k] = complex(buf.get()[k][0], buf.get()[k][1]);
    }

    const std::vector<complex>& samples() const { return samples_; }

    complex operator()(double w) const {
        const complex step = std::polar(1.0, -w * dt_);
        complex phase = std::polar(1.0, -w * t0_);
        complex acc = 0.0;
        for (int k = 0; k < n_; ++k) {
            acc += samples_[k] * phase;
            phase *= step;
        }
        return acc / double(n_);
    }

private:
    int n_;
    double dt_, t0_;
    std::vector<complex> samples_;
};

inline Spectrum dft(const BlochTrajectory& traj, Axis axis) {
    if (!traj.has(axis)) throw ValidationError("spectral", std::string("trajectory has no ") + axis_name(axis) + " axis");
    return dft(traj[axis], traj.times, axis);
}

/// Contiguous bin range [center_bin - half_width, center_bin + half_width].
struct PeakWindow {
    std::string label;
    double center = 0.0;
    long center_bin = 0;
    int half_width = 4;

    long lo() const { return center_bin - half_width; }
    long hi() const { return center_bin + half_width; }
    bool overlaps(const PeakWindow& o) const { return lo() <= o.hi() && o.lo() <= hi(); }
    bool contains(long m) const { return m >= lo() && m <= hi(); }
};

inline PeakWindow make_window(const Spectrum& spec, double center, int half_width, std::string label = {}) {
    if (half_width < 0) throw ValidationError("spectral", "window half-width must be >= 0");
    PeakWindow w{std::move(label), center, spec.nearest_bin(center), half_width};
    if (!spec.has_bin(w.lo()) || !spec.has_bin(w.hi())) {
        throw ResolvabilityError("peak window '" + w.label + "' at omega=" + std::to_string(center) +
                                     " leaves the spectrum (Nyquist limit)",
                                 {{w.label, "nyquist"}});
    }
    return w;
}

struct PeakEstimate {
    double center = 0.0;
    int half_width_bins = 0;
    complex area;
    double snr = std::numeric_limits<double>::quiet_NaN();
};

/// Plain sum of DFT values inside the window. Off-bin peaks leak outside any
/// finite window, so this is the raw area; see `fit_window_areas` for the
/// leakage-corrected estimate.
inline PeakEstimate integrate_peak(const Spectrum& spec, double center, int half_width_bins) {
    const PeakWindow w = make_window(spec, center, half_width_bins);
    complex acc = 0.0;
    for (long m = w.lo(); m <= w.hi(); ++m) acc += spec.at_bin(m);
    return {center, half_width_bins, acc};
}

inline std::vector<std::pair<std::string, std::string>> find_collisions(std::span<const PeakWindow> windows) {
    std::vector<std::pair<std::string, std::string>> hits;
    for (std::size_t i = 0; i < windows.size(); ++i)
        for (std::size_t j = i + 1; j < windows.size(); ++j)
            if (windows[i].overlaps(windows[j])) hits.emplace_back(windows[i].label, windows[j].label);
    return hits;
}

/// Throws ResolvabilityError naming every pair of overlapping windows.
inline void audit_windows(std::span<const PeakWindow> windows) {
    auto hits = find_collisions(windows);
    if (hits.empty()) return;
    std::string msg = "overlapping peak windows:";
    for (const auto& [a, b] : hits) msg += " (" + a + ", " + b + ")";
    throw ResolvabilityError(msg, std::move(hits));
}

/// RMS of |X_m| over bins outside every exclusion window.
inline double noise_floor(const Spectrum& spec, std::span<const PeakWindow> exclusions) {
    double acc = 0.0;
    std::size_t free = 0;
    for (long m = spec.min_bin(); m <= spec.max_bin(); ++m) {
        bool excluded = false;
        for (const auto& w : exclusions) {
            if (w.contains(m)) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        acc += std::norm(spec.at_bin(m));
        ++free;
    }
    if (4 * free < spec.size()) {
        throw ValidationError("spectral", "noise floor needs >= 25% free bins, have " + std::to_string(free) + " of " +
                                              std::to_string(spec.size()));
    }
    return std::sqrt(acc / double(free));
}

// ---------------------------------------------------------------------------
// Rabi comb

enum class CombFamily { population, sum_band, difference_band };

inline const char* family_name(CombFamily f) {
    switch (f) {
    case CombFamily::population: return "population";
    case CombFamily::sum_band: return "sum_band";
    default: return "difference_band";
    }
}

/// A positive comb frequency together with the density-matrix element it
/// encodes: rho_{n,n} for the population family, rho_{n,n+1} otherwise.
struct CombLine {
    CombFamily family;
    int n = 0;
    double omega = 0.0;
    std::string label;
};

inline std::string element_label(int i, int j) { return "rho(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

/// z family 2 Omega_n (n = 1..n_max); sum band Omega_1 (rho_01) and
/// Omega_{n+1} + Omega_n; difference band Omega_{n+1} - Omega_n (n >= 1).
inline std::vector<CombLine> rabi_comb(double g, int n_max) {
    if (!(g > 0.0)) throw ValidationError("spectral", "rabi_comb needs g > 0");
    std::vector<CombLine> comb;
    for (int n = 1; n <= n_max; ++n)
        comb.push_back({CombFamily::population, n, 2.0 * rabi_frequency(n, g), element_label(n, n)});
    if (n_max >= 1) comb.push_back({CombFamily::sum_band, 0, rabi_frequency(1, g), element_label(0, 1)});
    for (int n = 1; n < n_max; ++n)
        comb.push_back({CombFamily::sum_band, n, rabi_frequency(n + 1, g) + rabi_frequency(n, g),
                        element_label(n, n + 1)});
    for (int n = 1; n < n_max; ++n)
        comb.push_back({CombFamily::difference_band, n, rabi_frequency(n + 1, g) - rabi_frequency(n, g),
                        element_label(n, n + 1)});
    return comb;
}

inline std::vector<CombLine> comb_family(const std::vector<CombLine>& comb, CombFamily f) {
    std::vector<CombLine> out;
    for (const auto& c : comb)
        if (c.family == f) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Leakage-corrected window areas

/// Real-valued model component s(t) = sum_j w_j exp(i omega_j t).
struct Waveform {
    std::vector<std::pair<double, complex>> tones;

    static Waveform constant(double a) { return {{{0.0, complex(a, 0.0)}}}; }
    static Waveform cosine(double w, double a) { return {{{w, complex(0.5 * a, 0.0)}, {-w, complex(0.5 * a, 0.0)}}}; }
    static Waveform sine(double w, double a) { return {{{w, complex(0.0, -0.5 * a)}, {-w, complex(0.0, 0.5 * a)}}}; }

    Waveform& operator+=(const Waveform& o) {
        tones.insert(tones.end(), o.tones.begin(), o.tones.end());
        return *this;
    }
};

/// DFT value at bin frequency w_m of the waveform sampled on the spectrum's grid.
inline complex waveform_response(const Spectrum& spec, const Waveform& wf, double w_m, double decay) {
    complex acc = 0.0;
    for (const auto& [w, a] : wf.tones) acc += a * dirichlet(w_m - w, spec.n, spec.delta_t, spec.t0, decay);
    return acc;
}

/// K(p, c): window-p sum of the DFT of component c.
inline CMatrix window_kernel(const Spectrum& spec, std::span<const PeakWindow> windows,
                             std::span<const Waveform> components, double decay = 0.0) {
    CMatrix k = CMatrix::Zero(Eigen::Index(windows.size()), Eigen::Index(components.size()));
    const double dw = spec.bin_width();
    for (std::size_t p = 0; p < windows.size(); ++p)
        for (long m = windows[p].lo(); m <= windows[p].hi(); ++m)
            for (std::size_t c = 0; c < components.size(); ++c)
                k(Eigen::Index(p), Eigen::Index(c)) += waveform_response(spec, components[c], m * dw, decay);
    return k;
}

struct WindowFit {
    Eigen::VectorXd coefficients;
    CMatrix kernel;     // window sums of each component, for reporting
    CVector measured;   // raw window sums
    Eigen::VectorXd energy;  // sum over window bins of |component response|^2
};

/// Real coefficients b minimizing sum over window bins of |X_m - sum_c b_c R_c(w_m)|^2.
/// Fitting bin by bin rather than window sums keeps the noise gain flat when a
/// line sits half a bin off the grid; window sums of such a line nearly cancel.
inline WindowFit fit_window_areas(const Spectrum& spec, std::span<const PeakWindow> windows,
                                  std::span<const Waveform> components, double decay = 0.0) {
    WindowFit fit;
    fit.kernel = window_kernel(spec, windows, components, decay);
    fit.measured = CVector(Eigen::Index(windows.size()));
    const Eigen::Index cols = Eigen::Index(components.size());
    std::vector<long> bins;
    for (std::size_t p = 0; p < windows.size(); ++p) {
        complex acc = 0.0;
        for (long m = windows[p].lo(); m <= windows[p].hi(); ++m) {
            acc += spec.at_bin(m);
            bins.push_back(m);
        }
        fit.measured(Eigen::Index(p)) = acc;
    }
    const Eigen::Index rows = Eigen::Index(bins.size());
    if (2 * rows < cols) throw ValidationError("spectral", "fewer window equations than unknowns");
    const double dw = spec.bin_width();
    Eigen::MatrixXd a(2 * rows, cols);
    Eigen::VectorXd b(2 * rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const long m = bins[std::size_t(r)];
        for (Eigen::Index c = 0; c < cols; ++c) {
            const complex resp = waveform_response(spec, components[std::size_t(c)], m * dw, decay);
            a(r, c) = resp.real();
            a(rows + r, c) = resp.imag();
        }
        b(r) = spec.at_bin(m).real();
        b(rows + r) = spec.at_bin(m).imag();
    }
    fit.energy = a.colwise().squaredNorm().transpose();
    fit.coefficients = a.colPivHouseholderQr().solve(b);
    return fit;
}

/// Spectrum minus the fitted model sum_c b_c DFT[component_c].
inline Spectrum residual_spectrum(const Spectrum& spec, std::span<const Waveform> components,
                                  const Eigen::VectorXd& coefficients, double decay = 0.0) {
    Spectrum out = spec;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        complex model = 0.0;
        for (std::size_t c = 0; c < components.size(); ++c)
            model += coefficients(Eigen::Index(c)) * waveform_response(spec, components[c], spec.omega[i], decay);
        out.values[i] -= model;
    }
    return out;
}

/// CSV `omega,re,im`, ascending signed frequency, 17 significant digits.
inline void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
    const auto old_prec = out.precision(17);
    out << "omega,re,im\n";
    for (std::size_t i = 0; i < spec.size(); ++i)
        out << spec.omega[i] << ',' << spec.values[i].real() << ',' << spec.values[i].imag() << '\n';
    out.precision(old_prec);
}

} // namespace probetomo

#endif
