#include <gtest/gtest.h>

#include <sstream>

#include "probetomo/measurement.hpp"
#include "probetomo/states.hpp"

using namespace probetomo;

namespace {

MeasurementPlan plan_with(int n_t, std::optional<int> shots, std::uint64_t seed = 1) {
    MeasurementPlan p;
    p.n_t = n_t;
    p.shots = shots;
    p.seed = seed;
    return p;
}

DensityMatrix state1() { return density_from_pure(superposition({{1, 1.0}, {2, 1.0}}, 6)); }

} // namespace

TEST(Measurement, InfiniteShotsReproduceIdealTrajectory) {
    const auto traj = sample_trajectory(state1(), ProbeConfig{}, plan_with(64, std::nullopt));
    const auto ideal = ideal_bloch_trajectory(state1(), ProbeConfig{}, uniform_grid(0.075, 64));
    for (Axis a : {Axis::x, Axis::y, Axis::z}) EXPECT_EQ(traj[a], ideal[a]);
    EXPECT_EQ(traj.kind, TrajectoryKind::ideal);
}

TEST(Measurement, SameSeedSameRecord) {
    const auto a = sample_trajectory(state1(), ProbeConfig{}, plan_with(256, 50, 42));
    const auto b = sample_trajectory(state1(), ProbeConfig{}, plan_with(256, 50, 42));
    const auto c = sample_trajectory(state1(), ProbeConfig{}, plan_with(256, 50, 43));
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) EXPECT_EQ(a[ax], b[ax]);
    EXPECT_NE(a[Axis::z], c[Axis::z]);
    EXPECT_EQ(a.kind, TrajectoryKind::sampled);
}

TEST(Measurement, AxisSubsetDoesNotShiftRandomStreams) {
    MeasurementPlan all = plan_with(128, 20, 9), zonly = all;
    zonly.axes = {false, false, true};
    const auto a = sample_trajectory(state1(), ProbeConfig{}, all);
    const auto b = sample_trajectory(state1(), ProbeConfig{}, zonly);
    EXPECT_EQ(a[Axis::z], b[Axis::z]);
    EXPECT_FALSE(b.has(Axis::x));
}

TEST(Measurement, VacuumHasNoShotNoise) {
    const auto traj = sample_trajectory(density_from_pure(fock_state(0, 3)), ProbeConfig{}, plan_with(500, 10));
    for (double z : traj[Axis::z]) EXPECT_EQ(z, 1.0);
}

TEST(Measurement, OutcomesAreMeansOfPlusMinusOne) {
    const auto traj = sample_trajectory(state1(), ProbeConfig{}, plan_with(200, 7));
    for (double z : traj[Axis::z]) {
        const double ups = (z * 7 + 7) / 2;
        EXPECT_NEAR(ups, std::round(ups), 1e-12);
        EXPECT_LE(std::abs(z), 1.0);
    }
}

TEST(Measurement, UnbiasedWithBinomialVariance) {
    const int n_t = 4096, shots = 100;
    const auto ideal = sample_trajectory(state1(), ProbeConfig{}, plan_with(n_t, std::nullopt));
    const auto noisy = sample_trajectory(state1(), ProbeConfig{}, plan_with(n_t, shots, 5));
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
        double mean = 0.0, var_meas = 0.0, var_pred = 0.0;
        for (int k = 0; k < n_t; ++k) {
            const double d = noisy[a][k] - ideal[a][k];
            mean += d;
            var_meas += d * d;
            var_pred += (1.0 - ideal[a][k] * ideal[a][k]) / shots;
        }
        mean /= n_t;
        var_meas /= n_t;
        var_pred /= n_t;
        EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(var_pred / n_t)) << axis_name(a);
        EXPECT_NEAR(var_meas / var_pred, 1.0, 0.2) << axis_name(a);
    }
}

TEST(Measurement, DecoherenceDampsExpectations) {
    MeasurementPlan p = plan_with(100, std::nullopt);
    p.gamma = 0.05;
    const auto damped = sample_trajectory(state1(), ProbeConfig{}, p);
    const auto ideal = sample_trajectory(state1(), ProbeConfig{}, plan_with(100, std::nullopt));
    for (int k = 0; k < 100; ++k) {
        const double t = (k + 1) * 0.075;
        EXPECT_NEAR(damped[Axis::z][k], ideal[Axis::z][k] * std::exp(-0.05 * t), 1e-15);
    }
    EXPECT_DOUBLE_EQ(decohered_expectation(0.5, 0.0, 3.0), 0.5);
    // e^{-1}
    EXPECT_NEAR(decohered_expectation(1.0, 0.5, 2.0), 0.36788, 5e-6);
}

TEST(Measurement, PerAxisDecoherenceOverride) {
    MeasurementPlan p = plan_with(50, std::nullopt);
    p.axis_gamma = std::array<double, 3>{0.0, 0.0, 0.2};
    const auto damped = sample_trajectory(state1(), ProbeConfig{}, p);
    const auto ideal = sample_trajectory(state1(), ProbeConfig{}, plan_with(50, std::nullopt));
    EXPECT_EQ(damped[Axis::x], ideal[Axis::x]);
    EXPECT_NEAR(damped[Axis::z][9], ideal[Axis::z][9] * std::exp(-0.2 * 0.75), 1e-15);
}

TEST(Measurement, PlanValidation) {
    EXPECT_THROW(sample_trajectory(state1(), ProbeConfig{}, plan_with(0, 10)), ValidationError);
    EXPECT_THROW(sample_trajectory(state1(), ProbeConfig{}, plan_with(10, 0)), ValidationError);
    MeasurementPlan p = plan_with(10, 10);
    p.gamma = -1.0;
    EXPECT_THROW(sample_trajectory(state1(), ProbeConfig{}, p), ValidationError);
    EXPECT_DOUBLE_EQ(plan_with(4096, 1).total_time(), 4096 * 0.075);
}

TEST(Measurement, TrajectoryCsvLayout) {
    MeasurementPlan p = plan_with(3, std::nullopt);
    p.axes = {true, false, true};
    const auto traj = sample_trajectory(density_from_pure(fock_state(1, 3)), ProbeConfig{}, p);
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x,y,z");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 6), "0.0749");
    EXPECT_NE(line.find(",0,,"), std::string::npos) << line;
    // 17 significant digits round-trip the double exactly
    const std::string zfield = line.substr(line.rfind(',') + 1);
    EXPECT_EQ(std::stod(zfield), traj[Axis::z][0]);
}
