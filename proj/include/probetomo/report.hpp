#ifndef PROBETOMO_REPORT_HPP
#define PROBETOMO_REPORT_HPP

#include <cmath>
#include <optional>

#include <nlohmann/json.hpp>

#include "pipeline.hpp"

namespace probetomo {

using json = nlohmann::ordered_json;

namespace detail {

/// JSON has no infinities; non-finite values become null.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json complex_json(complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

inline json state_json(const FieldState& s) {
    json arr = json::array();
    for (int n = 0; n <= s.cutoff(); ++n) arr.push_back(complex_json(s[n]));
    return arr;
}

inline json warnings_json(const std::vector<Warning>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back({{"source", w.source}, {"message", w.message}, {"value", finite_or_null(w.value)}});
    return arr;
}

} // namespace detail

/// [{label, family, center, area_re, area_im, snr, raw_area_re, raw_area_im}, ...]
inline json peaks_json(const std::vector<PeakReport>& peaks) {
    json arr = json::array();
    for (const auto& p : peaks) {
        arr.push_back({{"label", p.label},
                       {"family", p.family},
                       {"center", p.center},
                       {"area_re", p.area.real()},
                       {"area_im", p.area.imag()},
                       {"snr", detail::finite_or_null(p.snr)},
                       {"raw_area_re", p.raw_area.real()},
                       {"raw_area_im", p.raw_area.imag()}});
    }
    return arr;
}

inline json reconstruction_json(const ReconstructionResult& r, std::optional<double> fidelity_vs_reference = {},
                                std::optional<double> g_estimate = {}) {
    json j;
    j["populations"] = r.populations;
    json coh = json::array();
    for (auto c : r.coherences) coh.push_back(detail::complex_json(c));
    j["coherences"] = coh;
    json ph = json::array();
    for (const auto& p : r.chain.phases) ph.push_back(p ? json(*p) : json(nullptr));
    j["phases"] = ph;
    j["chain_breaks"] = r.chain.breaks;
    j["trace_deficit"] = r.trace_deficit;
    if (fidelity_vs_reference) j["fidelity_vs_reference"] = *fidelity_vs_reference;
    if (g_estimate) j["g_estimate"] = *g_estimate;

    json diag;
    diag["raw_populations"] = r.raw_populations;
    json psnr = json::array(), csnr = json::array();
    for (double v : r.population_snr) psnr.push_back(detail::finite_or_null(v));
    for (double v : r.coherence_snr) csnr.push_back(detail::finite_or_null(v));
    diag["population_snr"] = psnr;
    diag["coherence_snr"] = csnr;
    diag["noise_floor"] = {{"x", r.noise_floor_x}, {"y", r.noise_floor_y}, {"z", r.noise_floor_z}};
    diag["unresolved_difference_band"] = r.unresolved_difference;
    if (r.assembled) {
        diag["assembled_state"] = detail::state_json(r.assembled->state);
        diag["assembled_partial"] = r.assembled->partial;
        diag["dropped_levels"] = r.assembled->dropped;
    }
    diag["warnings"] = detail::warnings_json(r.warnings);
    j["diagnostics"] = diag;
    return j;
}

/// One DCE sweep point.
inline json dce_point_json(const DceConfig& cfg, const DceStudy& st) {
    json j;
    j["g_over_omega"] = cfg.g_over_omega;
    j["tau"] = cfg.tau;
    j["frame"] = cfg.frame == Frame::lab ? "lab" : "interaction";
    j["c_g"] = detail::complex_json(st.pair.c_g);
    j["c_e"] = detail::complex_json(st.pair.c_e);
    j["phi_g"] = st.pair.phi_g ? detail::state_json(*st.pair.phi_g) : json(nullptr);
    j["phi_e"] = st.pair.phi_e ? detail::state_json(*st.pair.phi_e) : json(nullptr);
    j["mean_photons"] = st.mean_photons;
    j["leakage"] = st.leakage;
    j["parity"] = st.parity;
    if (st.recombined) {
        j["reconstructed"] = {
            {"c_g", st.recombined->c_g},
            {"c_e", st.recombined->c_e},
            {"phi_g", st.recombined->phi_g ? detail::state_json(*st.recombined->phi_g) : json(nullptr)},
            {"phi_e", st.recombined->phi_e ? detail::state_json(*st.recombined->phi_e) : json(nullptr)},
            {"fidelity_g", st.fidelity_g ? json(*st.fidelity_g) : json(nullptr)},
            {"fidelity_e", st.fidelity_e ? json(*st.fidelity_e) : json(nullptr)}};
    }
    j["warnings"] = detail::warnings_json(st.warnings);
    return j;
}

} // namespace probetomo

#endif
