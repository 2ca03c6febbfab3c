#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "zmhd/estimates.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/presets.hpp"

using namespace zmhd;

namespace {

PicardConfig short_run(double T = 0.02) {
  PicardConfig p;
  p.T = T;
  p.dt = 1e-3;
  return p;
}

const InequalityRecord& find(const std::vector<InequalityRecord>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return r;
  }
  throw std::out_of_range(name);
}

VectorField x_mode(const Grid& g, double delta) {
  return VectorField::from_function(g, [&](const Vec3& x) { return Vec3{delta * std::sin(x[1]), 0, 0}; });
}

}  // namespace

TEST(InterpolationInequality, ThetaSolvesTheExponentRelation) {
  EXPECT_DOUBLE_EQ(interpolation_theta(6.0), 0.5);
  for (double q : {3.5, 4.0, 5.0, 6.0}) {
    const double th = interpolation_theta(q);
    EXPECT_NEAR(th / 2.0 + (1.0 - th) / q, 1.0 / 3.0, 1e-15);
  }
  EXPECT_THROW(interpolation_theta(3.0), std::invalid_argument);
  EXPECT_THROW(interpolation_theta(8.0), std::invalid_argument);
}

TEST(InterpolationInequality, ConstantFieldIsEquality) {
  const Grid g = Grid::cube(8);
  const InequalityRecord r = interpolation_check(ScalarField(g, 2.5), 6.0);
  EXPECT_NEAR(r.lhs[0], r.rhs[0], 1e-12 * r.rhs[0]);
  EXPECT_TRUE(r.pass());
}

TEST(InterpolationInequality, HoldsForRandomFields) {
  const Grid g = Grid::cube(12);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const VectorField v = zmhd::testing::random_smooth_vector(g, seed);
    for (double q : {3.5, 4.5, 6.0}) {
      const InequalityRecord r = interpolation_check(v, q);
      EXPECT_LE(r.lhs[0], r.rhs[0]) << "seed " << seed << " q " << q;
    }
  }
}

TEST(InterpolationInequality, SingleModeRatioSettlesUnderRefinement) {
  auto ratio = [](int N) {
    const Grid g = Grid::cube(N);
    const auto f = ScalarField::from_function(g, [](const Vec3& x) { return std::sin(x[0]) * std::cos(x[2]); });
    const InequalityRecord r = interpolation_check(f, 6.0);
    return r.lhs[0] / r.rhs[0];
  };
  EXPECT_LT(ratio(16), 1.0);
  EXPECT_NEAR(ratio(16), ratio(32), 1e-3);
}

TEST(Audit, RestStatePassesEveryRecord) {
  const Grid g = Grid::cube(8);
  const auto [traj, report] = solve(State(g), PhysicsConfig{}, short_run(0.01));
  const auto records = audit_run(traj, PhysicsConfig{});
  EXPECT_EQ(records.size(), 9u);
  for (const auto& r : records) {
    EXPECT_TRUE(r.pass()) << r.name;
    EXPECT_EQ(r.lhs.size(), traj.size());
  }
  EXPECT_FALSE(find(records, "density_gradient").fitted_constant.has_value());
}

TEST(Audit, SmallDataPassesEveryRecord) {
  const Grid g = Grid::cube(8);
  const PhysicsConfig cfg;
  const auto [traj, report] = solve(make_preset("small-data", g), cfg, short_run());
  ASSERT_TRUE(report.converged);
  const auto records = audit_run(traj, cfg);
  for (const auto& r : records) EXPECT_TRUE(r.pass()) << r.name << " margin " << r.min_margin();
  // the balance is exact up to the dropped dissipation of the increments
  const InequalityRecord& e = find(records, "energy_identity");
  EXPECT_LT(e.rhs.back() - e.lhs.back(), 1e-2 * e.rhs.back());
  EXPECT_GT(*find(records, "magnetic_gradient").fitted_constant, 0.0);
}

TEST(Audit, StrongMagneticFieldKeepsPassing) {
  const Grid g = Grid::cube(8);
  const PhysicsConfig cfg;
  State s0 = make_preset("small-data", g);
  s0.H = s0.H * 3.0;
  const auto [strong, r2] = solve(s0, cfg, short_run());
  ASSERT_TRUE(r2.converged);
  const auto b = audit_run(strong, cfg);
  for (const char* name : {"magnetic_lp_2", "magnetic_lp_q", "magnetic_gradient"}) EXPECT_TRUE(find(b, name).pass());
  EXPECT_TRUE(find(b, "energy_identity").pass());
  EXPECT_TRUE(find(b, "energy_young").pass());
}

TEST(Audit, DetectsAViolatedEnvelope) {
  const Grid g = Grid::cube(8);
  auto [traj, report] = solve(make_preset("small-data", g), PhysicsConfig{}, short_run(0.01));
  traj[4].rho = traj[4].rho * 1.2;
  const auto records = audit_run(traj, PhysicsConfig{});
  EXPECT_FALSE(find(records, "density_upper").pass());
  EXPECT_LT(find(records, "density_upper").min_margin(), 0.0);
}

TEST(Stability, IdenticalRunsGiveZeroBitwise) {
  const Grid g = Grid::cube(8);
  const State s0 = make_preset("small-data", g);
  const StabilityReport r = stability_experiment(s0, s0, PhysicsConfig{}, short_run(0.01));
  EXPECT_TRUE(r.identical);
  for (double d : r.D) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.fitted_constant, 0.0);
}

TEST(Stability, PerturbationScalesQuadratically) {
  const Grid g = Grid::cube(8);
  const State a = make_preset("small-data", g);
  std::vector<double> final_D;
  for (double delta : {1e-3, 5e-4}) {
    State b = a;
    b.u += x_mode(g, delta);
    const StabilityReport r = stability_experiment(a, b, PhysicsConfig{}, short_run());
    EXPECT_FALSE(r.identical);
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.envelope.front(), r.D.front());
    final_D.push_back(r.D.back());
  }
  const double ratio = final_D[1] / final_D[0];
  EXPECT_GE(ratio, 0.2);
  EXPECT_LE(ratio, 0.3);
}

TEST(Stability, MagneticPerturbationSpreadsToOtherComponents) {
  const Grid g = Grid::cube(8);
  const State a = make_preset("small-data", g);
  State b = a;
  const double delta = 1e-3;
  b.H += x_mode(g, delta);
  const StabilityReport r = stability_experiment(a, b, PhysicsConfig{}, short_run());
  const double expected = inner(x_mode(g, delta), x_mode(g, delta));
  EXPECT_NEAR(r.D_H.front(), expected, 1e-12 * expected);
  EXPECT_EQ(r.D_u.front(), 0.0);
  EXPECT_EQ(r.D_rho.front(), 0.0);
  EXPECT_GT(r.D_u.back(), 0.0);
  EXPECT_GT(r.D_rho.back(), 0.0);
  EXPECT_TRUE(r.pass());
}

TEST(Stability, RejectsMismatchedTrajectories) {
  const Grid g = Grid::cube(8);
  Trajectory a(0.01), b(0.01);
  a.push_back(State(g));
  EXPECT_THROW(stability_report(a, b, PhysicsConfig{}), std::invalid_argument);
}

TEST(EstimatesCsv, OneRowPerLevel) {
  InequalityRecord r{"x", {0.0, 0.1}, {1.0, 2.0}, {1.5, 1.0}};
  const std::string csv = to_csv(std::vector<InequalityRecord>{r});
  EXPECT_EQ(csv.rfind("name,t,lhs,rhs,margin,fitted_constant,pass\n", 0), 0u);
  EXPECT_NE(csv.find(",true\n"), std::string::npos);
  EXPECT_NE(csv.find(",false\n"), std::string::npos);
  StabilityReport s;
  s.t = {0.0};
  s.D = s.D_u = s.envelope = {1.0};
  s.D_rho = s.D_H = s.eta = {0.0};
  EXPECT_EQ(to_csv(s), "t,D,D_u,D_rho,D_H,eta,envelope,pass\n0,1,1,0,0,0,1,true\n");
}
