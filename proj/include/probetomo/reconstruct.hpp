#ifndef PROBETOMO_RECONSTRUCT_HPP
#define PROBETOMO_RECONSTRUCT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace probetomo {

enum class BandWeighting { equal, snr };

struct AnalysisSettings {
    int half_width = 4;
    int levels = 10;  // highest Fock level in the analysed comb
    double population_floor = 1e-3;
    double trace_tolerance = 0.01;
    double coherence_tolerance = 1e-3;  // slack on the Cauchy-Schwarz check
    double decay_model = 0.0;           // decay rate assumed when fitting peak shapes
    BandWeighting weighting = BandWeighting::equal;

    void validate() const {
        if (half_width < 0) throw ValidationError("reconstruct", "half_width must be >= 0");
        if (levels < 1) throw ValidationError("reconstruct", "levels must be >= 1");
        if (population_floor < 0.0) throw ValidationError("reconstruct", "population_floor must be >= 0");
        if (decay_model < 0.0) throw ValidationError("reconstruct", "decay_model must be >= 0");
    }
};

/// One spectral line of the peak report; `area` is the leakage-corrected
/// weight carried by this line, `raw_area` the plain window sum.
struct PeakReport {
    std::string label;
    std::string family;
    double center = 0.0;
    complex area;
    complex raw_area;
    double snr = 0.0;
};

inline double safe_snr(double signal, double floor) {
    if (floor > 0.0) return signal / floor;
    return signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// ---------------------------------------------------------------------------
// Populations

struct PopulationEstimate {
    std::vector<double> raw;  // unclamped rho_nn, n = 0..levels
    std::vector<double> populations;
    std::vector<double> snr;
    double noise_floor = 0.0;
    std::vector<PeakWindow> windows;
    std::vector<PeakReport> peaks;
    std::vector<Warning> warnings;
};

/// rho_00 from the DC window, rho_nn from the +-2 Omega_n windows of z~,
/// fitted jointly against the grid's windowed peak shape.
inline PopulationEstimate populations_from_z(const Spectrum& spec_z, double g, const AnalysisSettings& s) {
    s.validate();
    const int levels = s.levels;
    const int hw = s.half_width;

    std::vector<PeakWindow> windows;
    std::vector<Waveform> comps;
    windows.push_back(make_window(spec_z, 0.0, hw, "DC " + element_label(0, 0)));
    comps.push_back(Waveform::constant(1.0));
    for (int n = 1; n <= levels; ++n) {
        const double w = 2.0 * rabi_frequency(n, g);
        windows.push_back(make_window(spec_z, w, hw, "+2W" + std::to_string(n) + " " + element_label(n, n)));
        windows.push_back(make_window(spec_z, -w, hw, "-2W" + std::to_string(n) + " " + element_label(n, n)));
        comps.push_back(Waveform::cosine(w, 1.0));
    }
    audit_windows(windows);

    const WindowFit fit = fit_window_areas(spec_z, windows, comps, s.decay_model);
    const Spectrum resid = residual_spectrum(spec_z, comps, fit.coefficients, s.decay_model);

    PopulationEstimate est;
    est.noise_floor = noise_floor(resid, windows);
    est.windows = windows;
    for (int n = 0; n <= levels; ++n) {
        const double v = fit.coefficients(n);
        est.raw.push_back(v);
        est.populations.push_back(std::max(0.0, v));
        // only significant negatives are reported; round-off and noise-level ones are clamped silently
        if (v < -std::max(1e-9, 3.0 * est.noise_floor))
            est.warnings.push_back({"reconstruct", "negative population clamped at n=" + std::to_string(n), v});
        est.snr.push_back(safe_snr(std::abs(v), est.noise_floor));
    }

    // window 0 is DC, then (+,-) pairs per level
    est.peaks.push_back({element_label(0, 0), family_name(CombFamily::population), 0.0, est.raw[0], fit.measured(0),
                         safe_snr(std::abs(est.raw[0]), est.noise_floor)});
    for (int n = 1; n <= levels; ++n) {
        const complex tone = 0.5 * est.raw[n];
        for (int sgn = 0; sgn < 2; ++sgn) {
            const PeakWindow& w = windows[2 * n - 1 + sgn];
            est.peaks.push_back({element_label(n, n), family_name(CombFamily::population), w.center, tone,
                                 fit.measured(2 * n - 1 + sgn), safe_snr(std::abs(tone), est.noise_floor)});
        }
    }
    return est;
}

// ---------------------------------------------------------------------------
// Coherences

struct AxisCoherence {
    std::vector<double> sum_band;                    // per n = 0..levels-1
    std::vector<std::optional<double>> diff_band;    // only resolvable members
    std::vector<double> combined;
    double noise_floor = 0.0;
    std::vector<PeakReport> peaks;
    std::vector<int> unresolved_difference;          // n dropped from the difference band
    std::vector<Warning> warnings;
};

namespace detail {

/// Component for element n (coefficient = Im or Re of rho_{n,n+1}) on the x
/// or y axis: -2 sin(Omega_1 t) for n = 0, otherwise
/// -[sin((Omega_{n+1}+Omega_n) t) + sin((Omega_{n+1}-Omega_n) t)].
inline Waveform coherence_waveform(int n, double g) {
    if (n == 0) return Waveform::sine(rabi_frequency(1, g), -2.0);
    const double hi = rabi_frequency(n + 1, g), lo = rabi_frequency(n, g);
    Waveform w = Waveform::sine(hi + lo, -1.0);
    w += Waveform::sine(hi - lo, -1.0);
    return w;
}

inline AxisCoherence coherence_axis(const Spectrum& spec, double g, const AnalysisSettings& s) {
    const int levels = s.levels;
    const int hw = s.half_width;
    const int count = levels;  // elements rho_{n,n+1}, n = 0..levels-1
    const char* ax = axis_name(spec.axis);

    std::vector<Waveform> comps;
    for (int n = 0; n < count; ++n) comps.push_back(coherence_waveform(n, g));

    std::vector<PeakWindow> sum_windows;
    for (int n = 0; n < count; ++n) {
        const double w = n == 0 ? rabi_frequency(1, g) : rabi_frequency(n + 1, g) + rabi_frequency(n, g);
        const std::string tag = std::string(ax) + (n == 0 ? " W1 " : " sum ") + element_label(n, n + 1);
        sum_windows.push_back(make_window(spec, w, hw, "+" + tag));
        sum_windows.push_back(make_window(spec, -w, hw, "-" + tag));
    }
    audit_windows(sum_windows);

    const WindowFit fit = fit_window_areas(spec, sum_windows, comps, s.decay_model);

    AxisCoherence out;
    out.sum_band.assign(fit.coefficients.data(), fit.coefficients.data() + count);
    out.diff_band.assign(count, std::nullopt);

    // Difference band. Leakage of every modelled line is subtracted, so a
    // member is usable when its +- windows stay clear of the windows of other
    // elements that actually carry weight.
    const Spectrum prelim = residual_spectrum(spec, comps, fit.coefficients, s.decay_model);
    const double xi0 = noise_floor(prelim, sum_windows);
    const double active_level = std::max(1e-9, 5.0 * xi0 * std::sqrt(2.0 * hw + 1.0));
    std::vector<bool> active(count);
    for (int n = 0; n < count; ++n) active[n] = std::abs(fit.coefficients(n)) > active_level;

    struct ElementWindows {
        int n;
        std::vector<PeakWindow> wins;
    };
    std::vector<ElementWindows> owned;  // windows in range, per element
    std::vector<PeakWindow> all_windows = sum_windows;
    for (int n = 0; n < count; ++n) owned.push_back({n, {sum_windows[2 * n], sum_windows[2 * n + 1]}});
    std::vector<std::array<PeakWindow, 2>> diff_pairs(count);
    for (int n = 1; n < count; ++n) {
        const double w = rabi_frequency(n + 1, g) - rabi_frequency(n, g);
        const std::string tag = std::string(ax) + " diff " + element_label(n, n + 1);
        diff_pairs[n] = {PeakWindow{"+" + tag, w, spec.nearest_bin(w), hw},
                         PeakWindow{"-" + tag, -w, spec.nearest_bin(-w), hw}};
        for (const auto& pw : diff_pairs[n]) {
            if (spec.has_bin(pw.lo()) && spec.has_bin(pw.hi())) {
                all_windows.push_back(pw);
                owned[n].wins.push_back(pw);
            }
        }
    }

    std::vector<double> diff_energy(count, 0.0), sum_energy(count, 0.0);
    for (int n = 0; n < count; ++n)
        sum_energy[n] = fit.energy(n);

    for (int n = 1; n < count; ++n) {
        const auto& pair = diff_pairs[n];
        bool clean = pair[0].lo() > pair[1].hi();
        for (const auto& pw : pair) {
            if (!spec.has_bin(pw.lo()) || !spec.has_bin(pw.hi())) clean = false;
            for (const auto& other : owned) {
                if (other.n == n || !active[other.n]) continue;
                for (const auto& ow : other.wins)
                    if (pw.overlaps(ow)) clean = false;
            }
        }
        if (!clean) {
            out.unresolved_difference.push_back(n);
            continue;
        }
        // per-bin projection onto this element's line shape, other elements subtracted
        const double dw = spec.bin_width();
        double num = 0.0, den = 0.0;
        for (const auto& pw : pair) {
            for (long m = pw.lo(); m <= pw.hi(); ++m) {
                complex r = spec.at_bin(m);
                for (int c = 0; c < count; ++c)
                    if (c != n) r -= fit.coefficients(c) * waveform_response(spec, comps[c], m * dw, s.decay_model);
                const complex k = waveform_response(spec, comps[n], m * dw, s.decay_model);
                num += (std::conj(k) * r).real();
                den += std::norm(k);
            }
        }
        if (den > 0.0) {
            out.diff_band[n] = num / den;
            diff_energy[n] = den;
        }
    }

    out.combined = out.sum_band;
    for (int n = 0; n < count; ++n) {
        if (!out.diff_band[n]) continue;
        const double a = out.sum_band[n], b = *out.diff_band[n];
        if (s.weighting == BandWeighting::snr) {
            out.combined[n] = (sum_energy[n] * a + diff_energy[n] * b) / (sum_energy[n] + diff_energy[n]);
        } else {
            out.combined[n] = 0.5 * (a + b);
        }
    }

    Eigen::VectorXd final_coeffs(count);
    for (int n = 0; n < count; ++n) final_coeffs(n) = out.combined[n];
    const Spectrum resid = residual_spectrum(spec, comps, final_coeffs, s.decay_model);
    std::vector<PeakWindow> exclusions = all_windows;
    out.noise_floor = noise_floor(resid, exclusions);

    for (int n = 0; n < count; ++n) {
        if (!out.diff_band[n]) continue;
        // +-w windows are conjugates, so each band estimate has sd xi / sqrt(energy)
        const double spread = std::sqrt(1.0 / std::max(diff_energy[n], 1e-300) + 1.0 / std::max(sum_energy[n], 1e-300));
        const double tol = 5.0 * out.noise_floor * spread + 1e-9;
        const double gap = std::abs(out.sum_band[n] - *out.diff_band[n]);
        if (gap > tol) {
            out.warnings.push_back({"reconstruct", std::string(ax) + " sum/difference band disagreement for " +
                                                       element_label(n, n + 1),
                                    gap});
        }
    }

    // Report: each element's lines with the weight they carry in this axis.
    for (int n = 0; n < count; ++n) {
        const double b = out.combined[n];
        const Waveform& wf = comps[n];
        for (std::size_t j = 0; j < wf.tones.size(); ++j) {
            const auto& [w, a] = wf.tones[j];
            const bool is_diff = n > 0 && j >= 2;
            PeakReport pr;
            pr.label = std::string(ax) + " " + element_label(n, n + 1);
            pr.family = family_name(is_diff ? CombFamily::difference_band : CombFamily::sum_band);
            pr.center = w;
            pr.area = b * a;
            const long m = spec.nearest_bin(w);
            if (spec.has_bin(m - hw) && spec.has_bin(m + hw)) {
                complex raw = 0.0;
                for (long q = m - hw; q <= m + hw; ++q) raw += spec.at_bin(q);
                pr.raw_area = raw;
            }
            pr.snr = safe_snr(std::abs(pr.area), out.noise_floor);
            out.peaks.push_back(pr);
        }
    }
    return out;
}

} // namespace detail

struct CoherenceEstimate {
    std::vector<complex> coherences;  // rho_{n,n+1}, n = 0..levels-1
    AxisCoherence x;                  // Im parts
    AxisCoherence y;                  // Re parts
    std::vector<double> snr;
    std::vector<Warning> warnings;
};

/// Im rho_{n,n+1} from x~, Re rho_{n,n+1} from y~.
inline CoherenceEstimate coherences_from_xy(const Spectrum& spec_x, const Spectrum& spec_y, double g,
                                            const AnalysisSettings& s) {
    s.validate();
    if (spec_x.n != spec_y.n || std::abs(spec_x.delta_t - spec_y.delta_t) > 1e-12 * spec_x.delta_t ||
        std::abs(spec_x.t0 - spec_y.t0) > 1e-12 * std::max(1.0, std::abs(spec_x.t0))) {
        throw ValidationError("reconstruct", "x and y spectra are on different grids");
    }
    CoherenceEstimate est;
    est.x = detail::coherence_axis(spec_x, g, s);
    est.y = detail::coherence_axis(spec_y, g, s);
    for (int n = 0; n < s.levels; ++n) {
        est.coherences.emplace_back(est.y.combined[n], est.x.combined[n]);
        const double xi = std::hypot(est.x.noise_floor, est.y.noise_floor);
        est.snr.push_back(safe_snr(std::abs(est.coherences.back()), xi));
    }
    est.warnings = est.x.warnings;
    est.warnings.insert(est.warnings.end(), est.y.warnings.begin(), est.y.warnings.end());
    return est;
}

// ---------------------------------------------------------------------------
// Phases and state assembly

struct PhaseChain {
    std::vector<std::optional<double>> phases;  // undetermined where nullopt
    std::vector<int> breaks;                    // first vanishing level of each interior gap
    int anchor = -1;                            // level whose phase is fixed to 0
};

/// phi_anchor = 0 at the first level above `population_floor` (level 0 for
/// the usual case), then phi_{n+1} = phi_n - arg(rho_{n,n+1}) while both
/// neighbours stay above the floor. A vanishing level between populated ones
/// breaks the chain; every phase after it is undetermined.
inline PhaseChain chain_phases(const std::vector<double>& populations, const std::vector<complex>& coherences,
                               double population_floor) {
    const int levels = static_cast<int>(populations.size());
    PhaseChain chain;
    chain.phases.assign(levels, std::nullopt);
    auto populated = [&](int n) { return populations[n] > population_floor; };

    int first = -1, last = -1;
    for (int n = 0; n < levels; ++n) {
        if (populated(n)) {
            if (first < 0) first = n;
            last = n;
        }
    }
    if (first < 0) return chain;
    chain.anchor = first;
    chain.phases[first] = 0.0;

    for (int n = first; n + 1 < levels; ++n) {
        if (!chain.phases[n] || !populated(n) || !populated(n + 1)) break;
        if (n >= static_cast<int>(coherences.size())) break;
        chain.phases[n + 1] = *chain.phases[n] - std::arg(coherences[n]);
    }
    for (int n = first + 1; n < last; ++n) {
        if (!populated(n) && populated(n - 1)) chain.breaks.push_back(n);
    }
    return chain;
}

struct AssembledState {
    FieldState state;
    bool partial = false;
    std::vector<int> dropped;  // below-floor levels with undetermined phase
};

/// c_n = sqrt(rho_nn) exp(i phi_n), renormalized. Undetermined levels below
/// the floor are dropped; populated ones keep phase 0 and mark the result partial.
inline AssembledState assemble_pure_state(const std::vector<double>& populations, const PhaseChain& chain,
                                          double population_floor) {
    const int levels = static_cast<int>(populations.size());
    if (levels < 2) throw ValidationError("reconstruct", "need at least two levels to assemble a state");
    CVector c = CVector::Zero(levels);
    bool partial = false;
    std::vector<int> dropped;
    for (int n = 0; n < levels; ++n) {
        const double mod = std::sqrt(std::max(0.0, populations[n]));
        if (chain.phases[n]) {
            c(n) = std::polar(mod, *chain.phases[n]);
        } else if (populations[n] > population_floor) {
            c(n) = mod;
            partial = true;
        } else if (populations[n] > 0.0) {
            dropped.push_back(n);
        }
    }
    if (c.norm() == 0.0) throw ValidationError("reconstruct", "no populated level to assemble");
    return {FieldState(c / c.norm()), partial, std::move(dropped)};
}

// ---------------------------------------------------------------------------
// Full reconstruction

struct ReconstructionResult {
    std::vector<double> populations;
    std::vector<double> raw_populations;
    std::vector<complex> coherences;
    PhaseChain chain;
    std::optional<AssembledState> assembled;
    double trace_deficit = 0.0;
    std::vector<double> population_snr;
    std::vector<double> coherence_snr;
    double noise_floor_x = 0.0, noise_floor_y = 0.0, noise_floor_z = 0.0;
    std::vector<int> unresolved_difference;
    std::vector<PeakReport> peaks;
    std::vector<Warning> warnings;

    /// Diagonal + first off-diagonals; every other element is zero.
    DensityMatrix partial_density() const {
        const int dim = static_cast<int>(populations.size());
        CMatrix rho = CMatrix::Zero(dim, dim);
        for (int n = 0; n < dim; ++n) rho(n, n) = populations[n];
        for (int n = 0; n + 1 < dim && n < static_cast<int>(coherences.size()); ++n) rho(n, n + 1) = coherences[n];
        return DensityMatrix(rho);
    }
};

/// Pass spec_x/spec_y as nullptr when only z was recorded: populations only.
inline ReconstructionResult reconstruct(const Spectrum* spec_x, const Spectrum* spec_y, const Spectrum& spec_z,
                                        double g, const AnalysisSettings& s) {
    ReconstructionResult r;
    const auto pops = populations_from_z(spec_z, g, s);
    r.populations = pops.populations;
    r.raw_populations = pops.raw;
    r.population_snr = pops.snr;
    r.noise_floor_z = pops.noise_floor;
    r.peaks = pops.peaks;
    r.warnings = pops.warnings;

    double tr = 0.0;
    for (double p : r.raw_populations) tr += p;
    r.trace_deficit = 1.0 - tr;
    if (std::abs(r.trace_deficit) > s.trace_tolerance) {
        r.warnings.push_back({"reconstruct", "population sum outside trace tolerance", r.trace_deficit});
    }

    if (spec_x && spec_y) {
        auto coh = coherences_from_xy(*spec_x, *spec_y, g, s);
        r.coherences = coh.coherences;
        r.coherence_snr = coh.snr;
        r.noise_floor_x = coh.x.noise_floor;
        r.noise_floor_y = coh.y.noise_floor;
        r.unresolved_difference = coh.x.unresolved_difference;
        r.peaks.insert(r.peaks.end(), coh.x.peaks.begin(), coh.x.peaks.end());
        r.peaks.insert(r.peaks.end(), coh.y.peaks.begin(), coh.y.peaks.end());
        r.warnings.insert(r.warnings.end(), coh.warnings.begin(), coh.warnings.end());

        const double xi = std::hypot(r.noise_floor_x, r.noise_floor_y);
        for (std::size_t n = 0; n < r.coherences.size(); ++n) {
            const double bound = std::sqrt(r.populations[n] * r.populations[n + 1]);
            const double excess = std::abs(r.coherences[n]) - bound;
            if (excess > s.coherence_tolerance + 3.0 * xi) {
                r.warnings.push_back({"reconstruct", "Cauchy-Schwarz bound exceeded for " + element_label(int(n), int(n) + 1),
                                      excess});
            }
        }

        r.chain = chain_phases(r.populations, r.coherences, s.population_floor);
        for (int b : r.chain.breaks)
            r.warnings.push_back({"reconstruct", "phase chain broken at vanishing level " + std::to_string(b), double(b)});
        r.assembled = assemble_pure_state(r.populations, r.chain, s.population_floor);
        if (r.assembled->partial)
            r.warnings.push_back({"reconstruct", "assembled state is partial: populated levels with undetermined phase", 0.0});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Coupling estimation

struct CouplingEstimate {
    double g = 0.0;
    double score = 0.0;
    double peak = 0.0;         // largest single comb amplitude at g
    double noise_floor = 0.0;  // RMS |z~| away from the fitted comb
};

struct CouplingSearch {
    double g_min = 0.2;
    double g_max = 3.0;
    int grid = 1000;
    int levels = 10;
    int half_width = 4;
    double alias_tolerance = 0.05;  // relative score band treated as an alias tie
    double line_fraction = 0.1;     // comb lines weaker than this share of the strongest line do not score
};

/// Finds g maximizing sum_n |z~(2 g sqrt n)| over lines above
/// line_fraction of the strongest non-DC bin: coarse grid, then golden-section
/// refinement of every local maximum. Among near-equal maxima (aliases at
/// g/sqrt k) the largest g wins.
inline CouplingEstimate estimate_coupling(const Spectrum& spec_z, const CouplingSearch& search = {}) {
    if (!(search.g_min > 0.0) || !(search.g_max > search.g_min) || search.grid < 3) {
        throw ValidationError("reconstruct", "invalid coupling search range");
    }
    const SpectrumInterpolator interp(spec_z);
    const double nyquist = std::numbers::pi / spec_z.delta_t;
    // Leakage sidelobes of a strong line would otherwise add up over the many
    // comb lines of a small-g alias and outscore the true g.
    double strongest = 0.0;
    for (long m = spec_z.min_bin(); m <= spec_z.max_bin(); ++m)
        if (std::abs(m) > search.half_width) strongest = std::max(strongest, std::abs(spec_z.at_bin(m)));
    const double line_floor = search.line_fraction * strongest;
    auto score = [&](double g) {
        double acc = 0.0;
        for (int n = 1; n <= search.levels; ++n) {
            const double w = 2.0 * g * std::sqrt(double(n));
            if (w >= nyquist) break;
            const double a = std::abs(interp(w));
            if (a >= line_floor) acc += a;
        }
        return acc;
    };

    const int m = search.grid;
    const double step = (search.g_max - search.g_min) / (m - 1);
    std::vector<double> gs(m), ss(m);
    for (int i = 0; i < m; ++i) {
        gs[i] = search.g_min + i * step;
        ss[i] = score(gs[i]);
    }

    struct Candidate {
        double g, s;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < m; ++i) {
        const bool left = i == 0 || ss[i] >= ss[i - 1];
        const bool right = i == m - 1 || ss[i] >= ss[i + 1];
        if (left && right) cands.push_back({gs[i], ss[i]});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.s > b.s; });
    if (cands.size() > 16) cands.resize(16);

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (auto& c : cands) {
        double a = std::max(search.g_min, c.g - step), b = std::min(search.g_max, c.g + step);
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = score(x1), f2 = score(x2);
        while (b - a > 1e-10 * std::max(1.0, c.g)) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = score(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = score(x1);
            }
        }
        const double gm = 0.5 * (a + b), sm = score(gm);
        if (sm > c.s) c = {gm, sm};
    }
    double best = 0.0;
    for (const auto& c : cands) best = std::max(best, c.s);
    Candidate pick{0.0, 0.0};
    for (const auto& c : cands)
        if (c.s >= (1.0 - search.alias_tolerance) * best && c.g > pick.g) pick = c;

    CouplingEstimate est;
    est.g = pick.g;
    est.score = pick.s;
    std::vector<PeakWindow> excl;
    excl.push_back({"DC", 0.0, 0, search.half_width});
    for (int n = 1; n <= search.levels; ++n) {
        const double w = 2.0 * pick.g * std::sqrt(double(n));
        if (w >= nyquist) break;
        est.peak = std::max(est.peak, std::abs(interp(w)));
        for (double sw : {w, -w}) excl.push_back({"comb", sw, spec_z.nearest_bin(sw), search.half_width});
    }
    est.noise_floor = noise_floor(spec_z, excl);
    if (!(est.peak > 5.0 * est.noise_floor)) {
        throw ValidationError("reconstruct", "coupling estimation failed: no comb peak above 5x the noise floor (peak " +
                                                 std::to_string(est.peak) + ", floor " +
                                                 std::to_string(est.noise_floor) + ")");
    }
    return est;
}

} // namespace probetomo

#endif
