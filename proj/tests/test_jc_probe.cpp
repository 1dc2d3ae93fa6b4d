#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "probetomo/jc_probe.hpp"
#include "probetomo/states.hpp"

using namespace probetomo;

TEST(JcProbe, GridStartsAtOneStep) {
    const auto t = uniform_grid(0.075, 4);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_DOUBLE_EQ(t[0], 0.075);
    EXPECT_DOUBLE_EQ(t[3], 0.3);
    EXPECT_THROW(uniform_grid(0.0, 4), ValidationError);
    EXPECT_THROW(uniform_grid(0.1, 0), ValidationError);
}

TEST(JcProbe, VacuumLeavesProbeInGround) {
    const auto t = uniform_grid(0.1, 200);
    const auto traj = ideal_bloch_trajectory(density_from_pure(fock_state(0, 4)), ProbeConfig{}, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_EQ(traj[Axis::z][k], 1.0);
        EXPECT_EQ(traj[Axis::x][k], 0.0);
        EXPECT_EQ(traj[Axis::y][k], 0.0);
    }
}

TEST(JcProbe, SinglePhotonRabiOscillation) {
    ProbeConfig cfg;
    cfg.coupling = 1.3;
    const auto t = uniform_grid(0.05, 100);
    const auto traj = ideal_bloch_trajectory(density_from_pure(fock_state(1, 4)), cfg, t);
    for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(traj[Axis::z][k], std::cos(2.0 * 1.3 * t[k]), 1e-14);
}

TEST(JcProbe, VacuumOneSuperpositionDrivesY) {
    // (|0> + |1>)/sqrt2: rho_01 = 1/2, y = -sin(Omega_1 t), x = 0
    const auto t = uniform_grid(0.05, 50);
    const auto traj =
        ideal_bloch_trajectory(density_from_pure(superposition({{0, 1.0}, {1, 1.0}}, 3)), ProbeConfig{}, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(traj[Axis::y][k], -std::sin(t[k]), 1e-14);
        EXPECT_NEAR(traj[Axis::x][k], 0.0, 1e-14);
    }
}

TEST(JcProbe, AxisSelection) {
    const auto t = uniform_grid(0.1, 10);
    const auto traj = ideal_bloch_trajectory(density_from_pure(fock_state(1, 3)), ProbeConfig{}, t, {false, false, true});
    EXPECT_FALSE(traj.has(Axis::x));
    EXPECT_FALSE(traj.has(Axis::y));
    EXPECT_TRUE(traj.has(Axis::z));
    EXPECT_EQ(traj.kind, TrajectoryKind::ideal);
}

TEST(JcProbe, InvalidCouplingRejected) {
    ProbeConfig cfg;
    cfg.coupling = 0.0;
    const auto t = uniform_grid(0.1, 10);
    EXPECT_THROW(ideal_bloch_trajectory(density_from_pure(fock_state(1, 3)), cfg, t), ValidationError);
}

TEST(JcProbe, ClosedFormMatchesBruteForcePropagator) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ut(0.0, 60.0), ug(0.5, 2.0);
    std::uniform_int_distribution<int> rank(1, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const DensityMatrix rho = oracle::random_density(rng, 6, 8, rank(rng));
        ProbeConfig cfg;
        cfg.coupling = ug(rng);
        const double t = ut(rng);
        const std::vector<double> times{t};
        const auto traj = ideal_bloch_trajectory(rho, cfg, times);
        const auto ref = oracle::jc_bloch(rho, cfg.coupling, t);
        worst = std::max({worst, std::abs(traj[Axis::x][0] - ref.x), std::abs(traj[Axis::y][0] - ref.y),
                          std::abs(traj[Axis::z][0] - ref.z)});

        const auto b = bloch_from_qubit(evolve_joint(rho, cfg, t));
        worst = std::max({worst, std::abs(b.x - ref.x), std::abs(b.y - ref.y), std::abs(b.z - ref.z)});
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(JcProbe, ReducedProbeStateIsPhysical) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = oracle::random_density(rng, 5, 6, 2);
        const auto q = evolve_joint(rho, ProbeConfig{}, 0.37 * trial);
        EXPECT_NEAR(q.trace().real(), 1.0, 1e-14);
        const auto b = bloch_from_qubit(q);
        EXPECT_LE(b.x * b.x + b.y * b.y + b.z * b.z, 1.0 + 1e-12);
    }
}

TEST(JcProbe, CoherentStateFrequencyContent) {
    // z(t) - rho_00 is a sum of cosines at 2 g sqrt(n) with Poisson weights
    const FieldState s = coherent_state(std::polar(0.7, std::numbers::pi / 3), 31);
    const auto t = uniform_grid(0.2, 30);
    const auto traj = ideal_bloch_trajectory(density_from_pure(s), ProbeConfig{}, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        double z = oracle::poisson(0.49, 0);
        for (int n = 1; n <= 31; ++n) z += oracle::poisson(0.49, n) * std::cos(2.0 * std::sqrt(double(n)) * t[k]);
        EXPECT_NEAR(traj[Axis::z][k], z, 1e-12);
    }
}
