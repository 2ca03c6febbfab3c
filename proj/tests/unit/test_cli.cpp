#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "zmhd/config.hpp"
#include "zmhd/snapshot.hpp"

using namespace zmhd;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("zmhd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path config(const std::string& text) {
    const fs::path p = dir_ / "run.cfg";
    std::ofstream(p) << text;
    return p;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  fs::path dir_;
};

const char* kQuick = "resolution = 8\nT = 0.005\ndt = 0.001\n";

}  // namespace

TEST_F(Cli, RestRunPassesAndWritesIdenticalStates) {
  const fs::path cfg = config(std::string(kQuick) + "preset = rest\n");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(cli::run({"run", "-c", cfg.string(), "-o", out.string()}), cli::kOk);
  for (const char* f : {"audit.csv", "diagnostics.csv", "picard.csv", "summary.txt", "config.txt"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_EQ(read(out / "audit.csv").find("false"), std::string::npos);
  const Trajectory traj = cli::read_trajectory(out / "snapshots");
  ASSERT_EQ(traj.size(), 6u);
  for (const State& s : traj) {
    EXPECT_EQ(s.rho.data(), traj.front().rho.data());
    EXPECT_EQ(s.u.max_magnitude(), 0.0);
  }
  EXPECT_EQ(load_config(out / "config.txt").preset, "rest");
}

TEST_F(Cli, DiagnosticsCadenceKeepsTheLastLevel) {
  const fs::path cfg = config(std::string(kQuick) + "preset = rest\ndiagnostics_every = 2\n");
  ASSERT_EQ(cli::run({"run", "-c", cfg.string(), "-o", (dir_ / "out").string()}), cli::kOk);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir_ / "out" / "snapshots")) names.push_back(e.path().filename());
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"level_000000.mhdf", "level_000002.mhdf", "level_000004.mhdf",
                                             "level_000005.mhdf"}));
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
  EXPECT_EQ(cli::run({"run", "-c", config("mu = 1\nlambda = -0.7\n").string()}), cli::kConfigError);
  EXPECT_EQ(cli::run({"run", "-c", config("gamma = 1\n").string()}), cli::kConfigError);
  EXPECT_EQ(cli::run({"run", "-c", config("viscosity = 1\n").string()}), cli::kConfigError);
  EXPECT_EQ(cli::run({"run", "-c", (dir_ / "missing.cfg").string()}), cli::kConfigError);
  EXPECT_EQ(cli::run({"run"}), cli::kConfigError);
  EXPECT_EQ(cli::run({"launch"}), cli::kConfigError);
  EXPECT_EQ(cli::run({"stability", "-c", config(kQuick).string(), "--perturb", "p:1e-3"}), cli::kConfigError);
  EXPECT_EQ(cli::run({"verify-bounds", (dir_ / "nowhere").string()}), cli::kConfigError);
}

TEST_F(Cli, UnconvergedIterationExitsWithThree) {
  const fs::path cfg = config(std::string(kQuick) + "max_sweeps = 1\ntol = 1e-14\n");
  EXPECT_EQ(cli::run({"run", "-c", cfg.string(), "-o", (dir_ / "out").string()}), cli::kSolverError);
}

TEST_F(Cli, CorruptedTrajectoryFailsTheAudit) {
  const fs::path cfg = config(kQuick);
  const fs::path out = dir_ / "out";
  ASSERT_EQ(cli::run({"run", "-c", cfg.string(), "-o", out.string()}), cli::kOk);
  ASSERT_EQ(cli::run({"verify-bounds", (out / "snapshots").string(), "-c", cfg.string()}), cli::kOk);
  State s = load_snapshot(out / "snapshots" / "level_000003.mhdf");
  s.rho = s.rho * 1.5;
  save_snapshot(s, out / "snapshots" / "level_000003.mhdf");
  EXPECT_EQ(cli::run({"verify-bounds", (out / "snapshots").string(), "-c", cfg.string()}), cli::kAuditFailure);
  EXPECT_NE(read(out / "snapshots" / "audit.csv").find("density_upper,0.0030000000000000001"), std::string::npos);
}

TEST_F(Cli, UnevenSnapshotsAreRejected) {
  const Grid g = Grid::cube(4);
  for (double t : {0.0, 0.1, 0.3}) {
    State s(g);
    s.t = t;
    save_snapshot(s, dir_ / ("level_" + std::to_string(static_cast<int>(t * 10)) + ".mhdf"));
  }
  EXPECT_THROW(cli::read_trajectory(dir_), ConfigError);
}

TEST_F(Cli, StabilityReportsQuadraticScaling) {
  const fs::path cfg = config(kQuick);
  const fs::path out = dir_ / "out";
  EXPECT_EQ(cli::run({"stability", "-c", cfg.string(), "--perturb", "u:1e-3", "-o", out.string()}), cli::kOk);
  const std::string csv = read(out / "stability.csv");
  EXPECT_EQ(csv.rfind("t,D,D_u,D_rho,D_H,eta,envelope,pass\n", 0), 0u);
  EXPECT_EQ(csv.find("false"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "stability_half.csv"));
}
