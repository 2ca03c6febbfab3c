#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "zmhd/config.hpp"
#include "zmhd/snapshot.hpp"

using namespace zmhd;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("zmhd_test_" + name);
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.resolution, (std::array<int, 3>{16, 16, 16}));
  EXPECT_EQ(c.preset, "small-data");
  EXPECT_EQ(c.picard.T, PicardConfig{}.T);
}

TEST(Config, ParsesKeysCommentsAndTriples) {
  const RunConfig c = parse_config(
      "# a comment\n"
      "  mu = 2.5   # trailing\n"
      "lambda=-1\n"
      "resolution = 8 12 16\n"
      "mode = per-step\n"
      "auto_damping = false\n"
      "preset = rotation\n");
  EXPECT_EQ(c.physics.mu, 2.5);
  EXPECT_EQ(c.physics.lambda, -1.0);
  EXPECT_EQ(c.resolution, (std::array<int, 3>{8, 12, 16}));
  EXPECT_EQ(c.picard.mode, PicardMode::PerStep);
  EXPECT_FALSE(c.picard.auto_damping);
  EXPECT_EQ(c.preset, "rotation");
}

TEST(Config, UnknownKeyIsAnError) {
  const std::string e = error_of("gama = 1.4\n");
  EXPECT_NE(e.find("unknown key 'gama'"), std::string::npos) << e;
  EXPECT_NE(e.find("test.cfg:1"), std::string::npos) << e;
}

TEST(Config, MalformedLinesAreErrors) {
  EXPECT_NE(error_of("mu 1\n"), "");
  EXPECT_NE(error_of("mu = one\n"), "");
  EXPECT_NE(error_of("mu = 1 2\n"), "");
  EXPECT_NE(error_of("mu =\n"), "");
  EXPECT_NE(error_of("mu = 1\nmu = 2\n"), "");
  EXPECT_NE(error_of("resolution = 8 8\n"), "");
  EXPECT_NE(error_of("mode = sideways\n"), "");
}

TEST(Config, ViscosityConstraintIsNamed) {
  // 2 mu + 3 lambda = -0.1
  const std::string e = error_of("mu = 1\nlambda = -0.7\n");
  EXPECT_NE(e.find("2*mu + 3*lambda > 0"), std::string::npos) << e;
  EXPECT_NE(error_of("mu = 0\n").find("mu > 0"), std::string::npos);
}

TEST(Config, AdiabaticExponentMustExceedOne) {
  EXPECT_NE(error_of("gamma = 1.0\n").find("gamma must exceed 1"), std::string::npos);
  EXPECT_NE(error_of("A = 0\n").find("A must be positive"), std::string::npos);
}

TEST(Config, OtherConstraints) {
  EXPECT_NE(error_of("q = 7\n"), "");
  EXPECT_NE(error_of("resolution = 2\n"), "");
  EXPECT_NE(error_of("diagnostics_every = 0\n"), "");
  EXPECT_NE(error_of("preset = vortex\n").find("unknown preset"), std::string::npos);
  EXPECT_NE(error_of("box_length = 1\n").find("box"), std::string::npos);
  EXPECT_NE(error_of("T = 0.0105\n"), "");
}

TEST(Config, FormatRoundTripIsIdempotent) {
  RunConfig c = parse_config("mu = 0.3\nlambda = 0.1\ndt = 0.0025\nT = 0.01\nresolution = 8 8 12\nmode = per-step\n");
  c.physics.gamma = 5.0 / 3.0;
  const std::string once = format_config(c);
  const RunConfig back = parse_config(once);
  EXPECT_EQ(format_config(back), once);
  EXPECT_EQ(back.physics.gamma, 5.0 / 3.0);
  EXPECT_EQ(back.resolution, c.resolution);
}

TEST(Config, FileRoundTrip) {
  const auto path = temp_path("cfg.txt");
  RunConfig c;
  c.preset = "traveling-wave";
  save_config(c, path);
  EXPECT_EQ(format_config(load_config(path)), format_config(c));
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(temp_path("missing.cfg")), ConfigError);
}

TEST(Config, InitialStateFromSnapshot) {
  const auto path = temp_path("init.mhdf");
  const Grid g = Grid::cube(8);
  State s(g);
  s.u = zmhd::testing::random_smooth_vector(g, 7);
  save_snapshot(s, path);
  RunConfig c = parse_config("resolution = 8\ninitial = " + path.string() + "\n");
  const State back = initial_state(c);
  EXPECT_EQ(back.u[1].data(), s.u[1].data());
  c.resolution = {16, 16, 16};
  EXPECT_THROW(initial_state(c), ConfigError);
  std::filesystem::remove(path);
}
