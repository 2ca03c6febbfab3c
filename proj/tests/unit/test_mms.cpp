#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zmhd/mms.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/spectral.hpp"

using namespace zmhd;

namespace {

std::vector<Vec3> random_points(unsigned seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-5.0, 12.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) pts.push_back({d(rng), d(rng), d(rng)});
  return pts;
}

// Fourth-order central difference in time of a sampled field.
template <class F>
auto time_derivative(F f, double t, double h = 1e-3) {
  return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) * (1.0 / (12.0 * h));
}

struct FdSources {
  ScalarField rho;
  VectorField u;
  VectorField H;
};

// The continuous operators applied to the sampled ansatz with fourth-order
// differences, written in conservative/curl form so that no closed-form
// derivative from the case is reused.
FdSources fd_sources(const ManufacturedCase& c, const Grid& g, double t) {
  const State s = c.state(g, t);
  const PhysicsConfig& cfg = c.physics();
  const ScalarField rho_t = time_derivative([&](double tt) { return c.state(g, tt).rho; }, t);
  const VectorField u_t = time_derivative([&](double tt) { return c.state(g, tt).u; }, t);
  const VectorField H_t = time_derivative([&](double tt) { return c.state(g, tt).H; }, t);
  FdSources out{rho_t + fd4::divergence(scale_pointwise(s.rho, s.u)), VectorField(g), H_t - fd4::curl(cross(s.u, s.H))};
  VectorField m = scale_pointwise(s.rho, u_t + fd4::vector_gradient(s.u).apply(s.u));
  m += fd4::gradient(cfg.pressure(s.rho));
  m -= fd4::laplacian(s.u) * cfg.mu;
  m -= fd4::grad_div(s.u) * (cfg.lambda + cfg.mu);
  m -= cross(fd4::curl(s.H), s.H);
  out.u = m;
  return out;
}

struct SourceErrors {
  double rho, u, H;
};

SourceErrors source_errors(const ManufacturedCase& c, int N, double t) {
  const Grid g = Grid::cube(N);
  const FdSources fd = fd_sources(c, g, t);
  const auto rho = ScalarField::from_function(g, [&](const Vec3& x) { return c.source_rho(t, x); });
  const auto u = VectorField::from_function(g, [&](const Vec3& x) { return c.source_u(t, x); });
  const auto H = VectorField::from_function(g, [&](const Vec3& x) { return c.source_H(t, x); });
  return {(rho - fd.rho).max_abs(), lp_norm(u - fd.u, kInf), lp_norm(H - fd.H, kInf)};
}

}  // namespace

TEST(Mms, ZeroAmplitudeCaseIsTheRestState) {
  const ManufacturedCase c = build_case(ModeSpec{});
  for (const Vec3& x : random_points(3, 20)) {
    EXPECT_EQ(c.source_rho(0.3, x), 0.0);
    const Vec3 su = c.source_u(0.3, x);
    const Vec3 sh = c.source_H(0.3, x);
    for (int a = 0; a < 3; ++a) {
      EXPECT_EQ(su[a], 0.0);
      EXPECT_EQ(sh[a], 0.0);
    }
    EXPECT_EQ(c.rho(0.3, x), 1.0);
  }
}

TEST(Mms, ZeroAmplitudeStudyReportsNoOrders) {
  const ManufacturedCase c = build_case(ModeSpec{});
  StudyConfig cfg;
  cfg.T = 0.01;
  cfg.resolutions = {8, 10, 12};
  cfg.spatial_dt = 0.005;
  cfg.dts = {0.01, 0.005, 0.0025};
  cfg.temporal_resolution = 8;
  const OrderTable t = convergence_study(c, cfg);
  for (const auto& r : t.spatial) EXPECT_LE(r.total(), 1e-13);
  for (const auto& r : t.temporal) EXPECT_LE(r.total(), 1e-13);
  EXPECT_FALSE(t.spatial_order.has_value());
  EXPECT_FALSE(t.temporal_order.has_value());
}

TEST(Mms, TravelingDensityNeedsNoContinuitySource) {
  ModeSpec s;
  s.rho = {{0.1, {1, 0, 0}, 1.0, 0.0}};  // 1 + 0.1 sin(x1 - t)
  s.u_mean = {1.0, 0.0, 0.0};
  const ManufacturedCase c = build_case(s);
  for (const Vec3& x : random_points(5, 50)) EXPECT_NEAR(c.source_rho(0.7, x), 0.0, 1e-15);
}

TEST(Mms, SourcesMatchFiniteDifferenceOracleAtFourthOrder) {
  const ManufacturedCase c = single_mode_case();
  const SourceErrors coarse = source_errors(c, 16, 0.02);
  const SourceErrors fine = source_errors(c, 32, 0.02);
  EXPECT_LT(fine.rho, 1e-4);
  EXPECT_LT(fine.u, 1e-4);
  EXPECT_LT(fine.H, 1e-4);
  // 2^4 = 16 for a clean fourth-order error
  EXPECT_GT(coarse.rho / fine.rho, 12.0);
  EXPECT_GT(coarse.u / fine.u, 12.0);
  EXPECT_GT(coarse.H / fine.H, 12.0);
}

TEST(Mms, BuildCaseValidatesTheAnsatz) {
  ModeSpec s;
  s.rho = {{0.6, {1, 0, 0}}, {0.5, {0, 1, 0}}};
  EXPECT_THROW(build_case(s), std::invalid_argument);
  ModeSpec h;
  h.H = {{{0.1, 0.1, 0.0}, {1, 0, 0}}};
  EXPECT_THROW(build_case(h), std::invalid_argument);
  PhysicsConfig bad;
  bad.gamma = 1.0;
  EXPECT_THROW(build_case(ModeSpec{}, bad), std::invalid_argument);
}

TEST(Mms, ManufacturedFieldsAreSolenoidalAndPositive) {
  const ManufacturedCase c = single_mode_case();
  const Grid g = Grid::cube(16);
  const State s = c.state(g, 0.03);
  EXPECT_LT(lp_norm(spectral::divergence(s.H), kInf), 1e-12);
  EXPECT_GT(s.rho.min(), 0.8);
}

TEST(Mms, ForcedSolverTracksTheAnsatz) {
  const ManufacturedCase c = single_mode_case();
  const StudyConfig cfg;
  const ErrorRow r = measure_error(c, 8, 0.002, 0.01, cfg.picard);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.total(), 1e-4);
  // without the sources the same run drifts much further
  PicardConfig p = cfg.picard;
  p.T = 0.01;
  p.dt = 0.002;
  const Grid g = Grid::cube(8);
  const auto [traj, report] = solve(c.initial_state(g), c.physics(), p);
  EXPECT_GT(lp_norm(traj.back().u - c.state(g, 0.01).u, 2.0), 10.0 * r.u);
}

TEST(Mms, FittedOrderRecoversAPowerLaw) {
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 4.0));
  EXPECT_NEAR(fitted_order(h, e), 4.0, 1e-12);
}

TEST(Mms, CsvHasOneRowPerRun) {
  OrderTable t;
  t.spatial = {ErrorRow{8, 0.1, 1e-3, 2e-3, 3e-3}, ErrorRow{16, 0.1, 1e-4, 2e-4, 3e-4}};
  t.spatial_order = 3.3;
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv.rfind("sweep,N,dt,error_rho,error_u,error_H,error_total,order\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("spatial,16,"), std::string::npos);
}
