#ifndef PROBETOMO_STATES_HPP
#define PROBETOMO_STATES_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fock_core.hpp"

namespace probetomo {

struct FockTerm {
    int n = 0;
    complex amplitude;
};

/// Normalized sum_k a_k |n_k>. Repeated n accumulate.
inline FieldState superposition(const std::vector<FockTerm>& terms, int cutoff) {
    if (cutoff < 1) throw ValidationError("states", "cutoff must be >= 1");
    CVector v = CVector::Zero(cutoff + 1);
    for (const auto& t : terms) {
        if (t.n < 0 || t.n > cutoff) {
            throw ValidationError("states", "superposition term n=" + std::to_string(t.n) + " outside cutoff " +
                                                std::to_string(cutoff));
        }
        v(t.n) += t.amplitude;
    }
    if (v.norm() == 0.0) throw ValidationError("states", "superposition has only zero amplitudes");
    return FieldState(v / v.norm());
}

/// Smallest cutoff whose truncated coherent-state norm deficit is below `deficit`.
inline int coherent_cutoff_required(complex alpha, double deficit = 1e-8) {
    const double mean = std::norm(alpha);
    double weight = std::exp(-mean);
    double kept = weight;
    int n = 0;
    while (1.0 - kept >= deficit && n < 100000) {
        ++n;
        weight *= mean / n;
        kept += weight;
    }
    return std::max(n, 1);
}

/// Truncated coherent state, c_{n+1} = c_n alpha / sqrt(n+1), renormalized.
inline FieldState coherent_state(complex alpha, int cutoff, double deficit = 1e-8) {
    if (cutoff < 1) throw ValidationError("states", "cutoff must be >= 1");
    CVector v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < cutoff; ++n) v(n + 1) = v(n) * alpha / std::sqrt(double(n + 1));
    const double lost = 1.0 - v.squaredNorm();
    if (lost >= deficit) {
        throw ValidationError("states", "coherent state cutoff too small: norm deficit " + std::to_string(lost) +
                                            "; need n_max >= " +
                                            std::to_string(coherent_cutoff_required(alpha, deficit)));
    }
    return FieldState(v / v.norm());
}

/// Amplitude list text: one `n re im` triple per line, `#` comments allowed.
/// The cutoff defaults to the largest listed n (at least 1).
inline FieldState parse_amplitude_list(std::istream& in, int cutoff = -1) {
    std::vector<FockTerm> terms;
    std::string line;
    int line_no = 0;
    int max_n = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int n;
        double re, im;
        if (!(ls >> n)) continue;
        if (!(ls >> re >> im) || n < 0) {
            throw ConfigError("state-file", "malformed amplitude line " + std::to_string(line_no) +
                                                ": expected `n re im`");
        }
        std::string extra;
        if (ls >> extra) {
            throw ConfigError("state-file", "trailing data on amplitude line " + std::to_string(line_no));
        }
        terms.push_back({n, complex(re, im)});
        max_n = std::max(max_n, n);
    }
    if (terms.empty()) throw ConfigError("state-file", "amplitude list is empty");
    return superposition(terms, cutoff < 0 ? max_n : cutoff);
}

inline FieldState load_amplitude_file(const std::string& path, int cutoff = -1) {
    std::ifstream in(path);
    if (!in) throw ConfigError("state-file", "cannot open amplitude file " + path);
    return parse_amplitude_list(in, cutoff);
}

} // namespace probetomo

#endif
