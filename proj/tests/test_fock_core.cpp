#include <gtest/gtest.h>

#include "probetomo/fock_core.hpp"

using namespace probetomo;

TEST(FockCore, FockStateHasSingleUnitAmplitude) {
    const FieldState s = fock_state(2, 5);
    EXPECT_EQ(s.cutoff(), 5);
    EXPECT_EQ(s.dimension(), 6);
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(s[n], complex(n == 2 ? 1.0 : 0.0, 0.0));
    EXPECT_DOUBLE_EQ(s.mean_photon_number(), 2.0);
}

TEST(FockCore, FockStateBeyondCutoffIsRejected) {
    EXPECT_THROW(fock_state(6, 5), ValidationError);
    EXPECT_THROW(fock_state(-1, 5), ValidationError);
    EXPECT_THROW(fock_state(0, 0), ValidationError);
    try {
        fock_state(6, 5);
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.module(), "fock_core");
        EXPECT_NE(std::string(e.what()).find("cutoff"), std::string::npos);
    }
}

TEST(FockCore, LadderOperatorsActOnFockStates) {
    const FieldState up = apply_ladder(fock_state(2, 5), Ladder::raise);
    EXPECT_NEAR(up[3].real(), std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(up.norm(), std::sqrt(3.0), 1e-15);

    const FieldState down = apply_ladder(fock_state(2, 5), Ladder::lower);
    EXPECT_NEAR(down[1].real(), std::sqrt(2.0), 1e-15);

    const FieldState vac = apply_ladder(fock_state(0, 5), Ladder::lower);
    EXPECT_EQ(vac.norm(), 0.0);
}

TEST(FockCore, RaisingAtTheCutoffWarns) {
    std::vector<Warning> w;
    const FieldState out = apply_ladder(fock_state(5, 5), Ladder::raise, &w);
    EXPECT_EQ(out.norm(), 0.0);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NEAR(w[0].value, 6.0, 1e-12);

    w.clear();
    apply_ladder(fock_state(3, 5), Ladder::raise, &w);
    EXPECT_TRUE(w.empty());
}

TEST(FockCore, NumberOperatorFromLadders) {
    CVector v(4);
    v << 0.5, complex(0.0, 0.5), complex(-0.5, 0.0), complex(0.0, -0.5);
    const FieldState s(v);
    const FieldState n_s = apply_ladder(apply_ladder(s, Ladder::lower), Ladder::raise);
    for (int n = 0; n <= 3; ++n) EXPECT_NEAR(std::abs(n_s[n] - double(n) * s[n]), 0.0, 1e-15);
}

TEST(FockCore, DensityFromPureIsHermitianUnitTracePure) {
    CVector v(3);
    v << complex(0.6, 0.0), complex(0.0, 0.48), complex(0.64, 0.0);
    const DensityMatrix rho = density_from_pure(FieldState(v));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-14);
    EXPECT_TRUE(rho.elements().isApprox(rho.elements().adjoint()));
    EXPECT_NEAR(std::abs(rho.coherence(0) - v(0) * std::conj(v(1))), 0.0, 1e-15);
    EXPECT_NO_THROW(rho.validate());
}

TEST(FockCore, DensityFromPureRejectsUnnormalized) {
    CVector v = CVector::Zero(3);
    v(0) = 2.0;
    EXPECT_THROW(density_from_pure(FieldState(v)), ValidationError);
}

TEST(FockCore, DensityMatrixEnforcesHermiticity) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = complex(0.5, 0.3);
    m(1, 1) = 0.5;
    m(0, 1) = complex(0.1, 0.2);
    m(1, 0) = complex(7.0, 7.0);
    const DensityMatrix rho(m);
    EXPECT_EQ(rho(1, 0), std::conj(rho(0, 1)));
    EXPECT_EQ(rho(0, 0).imag(), 0.0);
}

TEST(FockCore, ValidateFlagsBadTraceAndNegativePopulation) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.7;
    EXPECT_THROW(DensityMatrix(m).validate(), ValidationError);
    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    EXPECT_THROW(DensityMatrix(m).validate(), ValidationError);
}

TEST(FockCore, MixtureHasReducedPurity) {
    const DensityMatrix rho = mixture({0.5, 0.5}, {fock_state(0, 3), fock_state(1, 3)});
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 0.5, 1e-15);
    EXPECT_EQ(rho.coherence(0), complex(0.0, 0.0));
    EXPECT_THROW(mixture({1.0}, {fock_state(0, 3), fock_state(1, 3)}), ValidationError);
    EXPECT_THROW(mixture({0.5, 0.5}, {fock_state(0, 3), fock_state(1, 4)}), ValidationError);
}

TEST(FockCore, FidelityAndCutoffEmbedding) {
    const FieldState a = fock_state(1, 3);
    EXPECT_DOUBLE_EQ(fidelity(a, a), 1.0);
    EXPECT_DOUBLE_EQ(fidelity(a, fock_state(2, 3)), 0.0);
    EXPECT_THROW(fidelity(a, fock_state(1, 4)), ValidationError);
    const FieldState big = with_cutoff(a, 8);
    EXPECT_EQ(big.cutoff(), 8);
    EXPECT_DOUBLE_EQ(fidelity(big, fock_state(1, 8)), 1.0);
}

TEST(FockCore, FidelityIgnoresGlobalPhase) {
    CVector v(3);
    v << 0.6, complex(0.0, 0.8), 0.0;
    const FieldState a(v);
    const FieldState b(v * std::polar(1.0, 1.234));
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-15);
    const FieldState fixed = b.phase_fixed();
    EXPECT_NEAR(fixed[0].imag(), 0.0, 1e-15);
    EXPECT_GT(fixed[0].real(), 0.0);
}

TEST(FockCore, JointStateInterleavedIndexing) {
    EXPECT_EQ(JointState::index(JointState::ground, 0), 0);
    EXPECT_EQ(JointState::index(JointState::excited, 0), 1);
    EXPECT_EQ(JointState::index(JointState::ground, 3), 6);
    CVector v = CVector::Zero(8);
    v(JointState::index(JointState::excited, 2)) = 1.0;
    const JointState j(v);
    EXPECT_EQ(j.cutoff(), 3);
    EXPECT_EQ(j.branch(JointState::excited)(2), complex(1.0, 0.0));
    EXPECT_EQ(j.branch(JointState::ground).norm(), 0.0);
    EXPECT_THROW(JointState(CVector::Zero(5)), ValidationError);
}

TEST(FockCore, EdgeWeightTracksTruncation) {
    CVector v = CVector::Zero(4);
    v(0) = std::sqrt(0.99);
    v(3) = std::sqrt(0.01);
    EXPECT_NEAR(FieldState(v).edge_weight(), 0.01, 1e-15);
}
