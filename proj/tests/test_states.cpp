#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "probetomo/states.hpp"

using namespace probetomo;

TEST(States, SuperpositionIsNormalized) {
    const FieldState s = superposition({{1, 1.0}, {2, 1.0}}, 5);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(States, SuperpositionWithPhase) {
    const FieldState s = superposition({{1, 1.0}, {2, std::polar(1.0, std::numbers::pi / 4)}}, 4);
    const complex rho12 = s[1] * std::conj(s[2]);
    EXPECT_NEAR(rho12.real(), 0.35355339, 1e-8);
    EXPECT_NEAR(rho12.imag(), -0.35355339, 1e-8);
}

TEST(States, SuperpositionErrors) {
    EXPECT_THROW(superposition({{1, 0.0}, {2, 0.0}}, 4), ValidationError);
    EXPECT_THROW(superposition({{5, 1.0}}, 4), ValidationError);
    EXPECT_THROW(superposition({{-1, 1.0}}, 4), ValidationError);
}

TEST(States, RepeatedLevelsAccumulate) {
    const FieldState s = superposition({{0, 1.0}, {0, 1.0}, {1, 2.0}}, 2);
    EXPECT_NEAR(std::abs(s[0] - s[1]), 0.0, 1e-15);
}

TEST(States, CoherentStateMatchesPoissonWeights) {
    const complex alpha = std::polar(0.7, std::numbers::pi / 3);
    const FieldState s = coherent_state(alpha, 31);
    for (int n = 0; n <= 12; ++n) EXPECT_NEAR(std::norm(s[n]), oracle::poisson(0.49, n), 1e-14) << n;
    // e^{-0.49}
    EXPECT_NEAR(std::norm(s[0]), 0.61263, 5e-6);
    EXPECT_NEAR(s.mean_photon_number(), 0.49, 1e-12);
    EXPECT_LT(s.edge_weight(), 1e-8);
}

TEST(States, CoherentPhasesAreLinearInN) {
    const FieldState s = coherent_state(std::polar(0.7, std::numbers::pi / 3), 31);
    for (int n = 1; n <= 5; ++n) {
        const double d = std::remainder(std::arg(s[n]) - n * std::numbers::pi / 3, 2 * std::numbers::pi);
        EXPECT_NEAR(d, 0.0, 1e-12) << n;
    }
}

TEST(States, CoherentCutoffTooSmallNamesRequiredCutoff) {
    const complex alpha(2.0, 0.0);
    const int need = coherent_cutoff_required(alpha);
    EXPECT_GT(need, 5);
    try {
        coherent_state(alpha, 5);
        FAIL() << "expected a cutoff error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("n_max >= " + std::to_string(need)), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(coherent_state(alpha, need));
}

TEST(States, CoherentVacuum) {
    const FieldState s = coherent_state(0.0, 3);
    EXPECT_DOUBLE_EQ(fidelity(s, fock_state(0, 3)), 1.0);
}

TEST(States, AmplitudeListParses) {
    std::istringstream in("# state 1\n1 1 0\n\n2 1 0   # trailing comment\n");
    const FieldState s = parse_amplitude_list(in, 6);
    EXPECT_EQ(s.cutoff(), 6);
    EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(States, AmplitudeListDefaultCutoffIsLargestLevel) {
    std::istringstream in("0 0.6 0\n3 0 0.8\n");
    const FieldState s = parse_amplitude_list(in);
    EXPECT_EQ(s.cutoff(), 3);
    EXPECT_NEAR(s[3].imag(), 0.8, 1e-15);
}

TEST(States, AmplitudeListErrorsNameTheFile) {
    for (const char* bad : {"1 1\n", "1 1 0 7\n", "-1 1 0\n", ""}) {
        std::istringstream in(bad);
        try {
            parse_amplitude_list(in);
            FAIL() << "accepted '" << bad << "'";
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.key(), "state-file");
        }
    }
    EXPECT_THROW(load_amplitude_file("/nonexistent/amplitudes.txt"), ConfigError);
}
