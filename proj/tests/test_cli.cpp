#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("probetomo_cli_") + info->name() + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome call(const std::string& args) {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = std::string("\"") + PROBETOMO_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                                err.string() + "\"";
        const int status = std::system(cmd.c_str());
        Outcome o;
        o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        o.out = slurp(out);
        o.err = slurp(err);
        return o;
    }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    std::string out_dir(const std::string& name) const { return "--out-dir \"" + (dir_ / name).string() + "\""; }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, PrintDefaults) {
    const auto o = call("--print-defaults");
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("[plan]"), std::string::npos);
    EXPECT_NE(o.out.find("delta_t = 0.075"), std::string::npos);
    EXPECT_NE(o.out.find("paper-state1"), std::string::npos);
}

TEST_F(Cli, MalformedConfigExitsTwoWithKey) {
    const auto cfg = write("bad.cfg", "[plan]\nn_tt = 4\n");
    const auto o = call("reconstruct --config \"" + cfg.string() + "\" " + out_dir("o"));
    EXPECT_EQ(o.code, 2);
    const json j = json::parse(o.err);
    EXPECT_EQ(j["error"]["kind"], "config");
    EXPECT_EQ(j["error"]["key"], "plan.n_tt");
}

TEST_F(Cli, BadArgumentExitsTwo) {
    const auto o = call("reconstruct --no-such-flag");
    EXPECT_EQ(o.code, 2);
    EXPECT_EQ(json::parse(o.err)["error"]["key"], "argv");
}

TEST_F(Cli, OverlappingWindowsExitFour) {
    const auto cfg = write("wide.cfg", "[spectral]\nhalf_width = 40\n");
    const auto o = call("reconstruct --preset paper-state1 --config \"" + cfg.string() + "\" " + out_dir("o"));
    EXPECT_EQ(o.code, 4);
    const json j = json::parse(o.err);
    EXPECT_EQ(j["error"]["kind"], "resolvability");
    EXPECT_FALSE(j["error"]["collisions"].empty());
}

TEST_F(Cli, CutoffViolationExitsThree) {
    const auto cfg = write("big.cfg", "[state]\nkind = fock\nn = 40\n");
    const auto o = call("reconstruct --config \"" + cfg.string() + "\" " + out_dir("o"));
    EXPECT_EQ(o.code, 3);
    EXPECT_EQ(json::parse(o.err)["error"]["kind"], "validation");
}

TEST_F(Cli, ReconstructWritesArtifacts) {
    const auto o = call("reconstruct --preset paper-state1 " + out_dir("o"));
    ASSERT_EQ(o.code, 0) << o.err;
    for (const char* f : {"trajectory.csv", "spectrum_x.csv", "spectrum_y.csv", "spectrum_z.csv", "peaks.json",
                          "reconstruction.json"})
        EXPECT_TRUE(fs::exists(dir_ / "o" / f)) << f;
    const json r = json::parse(slurp(dir_ / "o" / "reconstruction.json"));
    EXPECT_NEAR(r["populations"][1].get<double>(), 0.5, 1e-3);
    EXPECT_NEAR(r["coherences"][1]["re"].get<double>(), 0.5, 1e-3);
    EXPECT_NEAR(r["fidelity_vs_reference"].get<double>(), 1.0, 1e-6);
}

TEST_F(Cli, SameSeedGivesIdenticalOutput) {
    const auto cfg = write("noisy.cfg", "[plan]\nn_m = 50\nn_t = 2048\n[spectral]\nlevels = 3\n");
    const std::string base = "reconstruct --preset paper-state2 --config \"" + cfg.string() + "\" --seed 77 ";
    ASSERT_EQ(call(base + out_dir("a")).code, 0);
    ASSERT_EQ(call(base + out_dir("b")).code, 0);
    ASSERT_EQ(call("reconstruct --preset paper-state2 --config \"" + cfg.string() + "\" --seed 78 " + out_dir("c")).code,
              0);
    for (const char* f : {"trajectory.csv", "spectrum_z.csv", "reconstruction.json"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    EXPECT_NE(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "c" / "trajectory.csv"));
}

TEST_F(Cli, SinglePointSweepHasNoRegression) {
    const auto cfg = write("one.cfg", "[plan]\naxes = z\nsweep_n_m = 100\nsweep_n_t = 1024\nsweep_seeds = 2\n"
                                      "[spectral]\nlevels = 1\n");
    const auto o = call("noise-sweep --config \"" + cfg.string() + "\" " + out_dir("s"));
    ASSERT_EQ(o.code, 0) << o.err;
    std::istringstream csv(slurp(dir_ / "s" / "noise_sweep.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 2);
    const json j = json::parse(slurp(dir_ / "s" / "noise_slopes.json"));
    EXPECT_TRUE(j["xi_vs_n_m"].empty());
    EXPECT_TRUE(j["snr_vs_n_t"].empty());
}

TEST_F(Cli, DceGridGivesOneRecordPerPoint) {
    const auto cfg = write("grid.cfg", "[dce]\npoints = 0.3 auto; 0.5 auto\nrk4_check = false\ncutoff = 24\n");
    const auto o = call("dce --preset paper-dce --config \"" + cfg.string() + "\" " + out_dir("d"));
    ASSERT_EQ(o.code, 0) << o.err;
    const json j = json::parse(slurp(dir_ / "d" / "dce.json"));
    ASSERT_EQ(j.size(), 2u);
    EXPECT_DOUBLE_EQ(j[0]["g_over_omega"].get<double>(), 0.3);
    EXPECT_NEAR(j[1]["parity"].get<double>(), 1.0, 1e-8);
    EXPECT_GE(j[1]["reconstructed"]["fidelity_g"].get<double>(), 0.999);
}

TEST_F(Cli, StateFileInput) {
    const auto amps = write("amps.txt", "# two levels\n0 1 0\n1 0 1\n");
    const auto o = call("reconstruct --state-file \"" + amps.string() + "\" " + out_dir("f"));
    ASSERT_EQ(o.code, 0) << o.err;
    const json r = json::parse(slurp(dir_ / "f" / "reconstruction.json"));
    // rho_01 = c0 c1* = -i/2
    EXPECT_NEAR(r["coherences"][0]["im"].get<double>(), -0.5, 1e-3);

    const auto missing = call("reconstruct --state-file \"" + (dir_ / "nope.txt").string() + "\" " + out_dir("f"));
    EXPECT_EQ(missing.code, 2);
}

TEST_F(Cli, EstimateCoupling) {
    const auto cfg = write("g.cfg", "[probe]\ng = 1.3\n");
    const auto o = call("estimate-g --preset fock1 --config \"" + cfg.string() + "\" " + out_dir("g"));
    ASSERT_EQ(o.code, 0) << o.err;
    const json j = json::parse(slurp(dir_ / "g" / "estimate_g.json"));
    EXPECT_NEAR(j["g_estimate"].get<double>(), 1.3, j["resolution"].get<double>());
}
