#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/picard.hpp"
#include "zmhd/presets.hpp"
#include "zmhd/reference.hpp"

using namespace zmhd;
using zmhd::testing::max_diff;

TEST(ExplicitRk3, UniformStateIsSteady) {
  const Grid g = Grid::cube(8);
  const State s0(ScalarField(g, 1.2), VectorField(g, {0.3, 0.0, -0.1}), VectorField(g, {0.0, 1.0, 0.5}));
  const Trajectory traj = solve_explicit_rk3(s0, PhysicsConfig{}, 0.01, 1e-3);
  ASSERT_EQ(traj.size(), 11u);
  // the SSP stage averages round the constants, nothing else moves them
  EXPECT_LT(max_diff(traj.back().rho, s0.rho), 1e-15);
  EXPECT_LT(max_diff(traj.back().u, s0.u), 1e-15);
  EXPECT_LT(max_diff(traj.back().H, s0.H), 1e-15);
}

// u = a e^{-mu t} sin(x2) e1 with rho = 1, H = 0 solves the full nonlinear
// system: the convective term and pressure gradient vanish identically.
TEST(ExplicitRk3, ShearLayerDecaysAtTheViscousRate) {
  const Grid g = Grid::cube(16);
  const double a = 0.1, T = 0.05;
  State s0(g);
  s0.u = VectorField::from_function(g, [&](const Vec3& x) { return Vec3{a * std::sin(x[1]), 0, 0}; });
  const Trajectory traj = solve_explicit_rk3(s0, PhysicsConfig{}, T, 1e-3);
  const VectorField exact = s0.u * std::exp(-T);
  // the FD4 symbol of d^2/dx^2 on sin is 1 - h^4/90 + ..., about 2.6e-4 here
  EXPECT_LT(lp_norm(traj.back().u - exact, 2.0) / lp_norm(exact, 2.0), T * 3e-4);
  EXPECT_EQ(traj.back().rho.max_abs(), 1.0);
}

TEST(ExplicitRk3, AgreesWithPicardOnShortSmallDataRun) {
  const Grid g = Grid::cube(8);
  const State s0 = make_preset("small-data", g);
  PicardConfig p;
  p.T = 0.01;
  const auto [traj, report] = solve(s0, PhysicsConfig{}, p);
  const Trajectory ref = solve_explicit_rk3(s0, PhysicsConfig{}, p.T, p.dt);
  ASSERT_TRUE(report.converged);
  EXPECT_LT(trajectory_difference(traj, ref), 5e-3);
  EXPECT_GT(trajectory_difference(traj, ref), 0.0);
}

TEST(TrajectoryDifference, ZeroForIdenticalTrajectories) {
  const Grid g = Grid::cube(8);
  const Trajectory ref = solve_explicit_rk3(make_preset("small-data", g), PhysicsConfig{}, 0.003, 1e-3);
  EXPECT_EQ(trajectory_difference(ref, ref), 0.0);
}
