#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "zmhd/induction.hpp"
#include "zmhd/spectral.hpp"

using namespace zmhd;
using zmhd::testing::max_abs;
using zmhd::testing::max_diff;
using zmhd::testing::random_smooth;
using zmhd::testing::random_smooth_vector;

namespace {

VectorField solenoidal_field(const Grid& g) {
  return VectorField::from_function(g, [](const Vec3& x) {
    return Vec3{0.5 + std::sin(x[2]), std::sin(x[0]), 0.2 + std::cos(x[1])};
  });
}

VelocityHistory smooth_history(const Grid& g, double T, double dt) {
  std::vector<VectorField> lv;
  const int K = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k <= K; ++k) {
    const double t = k * dt;
    lv.push_back(VectorField::from_function(g, [t](const Vec3& x) {
      return Vec3{0.5 * (1 + t) * std::sin(x[0]) * std::cos(x[1]) + 0.3, 0.4 * std::sin(x[1] + x[2]),
                  0.3 * std::cos(x[2] - x[0])};
    }));
  }
  return VelocityHistory(std::move(lv), dt);
}

}  // namespace

TEST(Stretching, TraceIsMinusTwiceDivergence) {
  const Grid g = Grid::cube(12);
  const auto u = random_smooth_vector(g, 2);
  const auto s = stretching_matrix(u);
  EXPECT_LT(max_diff(s.trace(), -2.0 * spectral::divergence(u)), 1e-12);
}

TEST(Induction, ZeroVelocityIsBitwiseIdentity) {
  const Grid g = Grid::cube(8);
  const auto H0 = solenoidal_field(g);
  const VelocityHistory hist({VectorField(g), VectorField(g), VectorField(g)}, 0.1);
  const auto sol = evolve_induction(H0, hist, 0.2);
  ASSERT_EQ(sol.levels.size(), 3u);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(sol.levels.back()[c].data(), H0[c].data());
  for (double d : divergence_monitor(sol)) EXPECT_LE(d, 1e-12);
}

TEST(Induction, FrozenGradientStretching) {
  const auto H = evolve_uniform_field([](double) { return Mat3{0.1, 0, 0, 0, 0, 0, 0, 0, 0}; }, {0, 1, 0}, 1.0, 100);
  EXPECT_NEAR(H[1], std::exp(-0.1), 1e-8);
  EXPECT_NEAR(H[1], 0.904837, 1e-6);
  EXPECT_EQ(H[0], 0.0);
  EXPECT_EQ(H[2], 0.0);
}

TEST(Induction, RotationPreservesMagnitude) {
  const double omega = 1.3;
  const Vec3 H0{0.3, -0.7, 0.5};
  const auto H = evolve_uniform_field([omega](double) { return Mat3{0, -omega, 0, omega, 0, 0, 0, 0, 0}; }, H0,
                                      2.0, 200);
  const double vol = std::pow(2 * std::numbers::pi, 1.5);
  const double before = vol * std::hypot(H0[0], H0[1], H0[2]);
  const double after = vol * std::hypot(H[0], H[1], H[2]);
  EXPECT_NEAR(after, before, 1e-10 * before);
  // rotated by omega * t about e3
  EXPECT_NEAR(H[0], std::cos(2.6) * H0[0] - std::sin(2.6) * H0[1], 1e-9);
}

TEST(Induction, GrowthRateScalarExample) {
  const Mat3 g{0.1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_NEAR(magnetic_growth_rate(g, 2.0), 0.05 + 0.1 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(magnetic_growth_rate(g, kInf), 0.1 * std::sqrt(2.0), 1e-15);
  EXPECT_THROW(magnetic_growth_rate(g, 1.5), std::invalid_argument);
}

TEST(Induction, GrowthBoundZeroVelocity) {
  const Grid g = Grid::cube(8);
  EXPECT_EQ(magnetic_growth_bound(VelocityHistory::steady(VectorField(g)), 1.0, 2.0), 1.0);
}

TEST(Induction, LpNormsStayBelowGrowthBound) {
  const Grid g = Grid::cube(16);
  const auto hist = smooth_history(g, 0.2, 0.02);
  const auto H0 = solenoidal_field(g);
  const auto sol = evolve_induction(H0, hist, 0.2);
  for (std::size_t k = 1; k < sol.levels.size(); ++k) {
    const double t = k * hist.dt();
    for (double p : {2.0, 6.0, kInf}) {
      const double ratio = lp_norm(sol.levels[k], p) / lp_norm(H0, p);
      EXPECT_LE(ratio, magnetic_growth_bound(hist, t, p) * (1 + 1e-3)) << "p=" << p << " t=" << t;
    }
  }
}

TEST(Induction, DivergenceShrinksUnderRefinement) {
  double prev = 0.0;
  for (int n : {8, 16}) {
    const Grid g = Grid::cube(n);
    const auto sol = evolve_induction(solenoidal_field(g), smooth_history(g, 0.1, 0.01), 0.1);
    const double d = sol.divergence.back();
    if (prev > 0.0) EXPECT_LT(d, prev / 16);
    prev = d;
  }
}

TEST(Induction, InitialDivergenceIsTransportedNotRemoved) {
  const Grid g = Grid::cube(16);
  const double eps = 1e-3;
  auto H0 = solenoidal_field(g);
  H0[0] += ScalarField::from_function(g, [eps](const Vec3& x) { return eps * std::sin(x[0]); });
  InductionOptions opts;
  opts.divergence_tolerance = 1.0;
  const auto sol = evolve_induction(H0, smooth_history(g, 0.1, 0.01), 0.1, opts);
  const double d0 = sol.divergence.front();
  EXPECT_NEAR(d0, eps * std::sqrt(std::numbers::pi) * 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(sol.divergence.back(), d0, 0.2 * d0);
}

TEST(Induction, RejectsDivergentInitialData) {
  const Grid g = Grid::cube(8);
  const auto H0 = VectorField::from_function(g, [](const Vec3& x) { return Vec3{std::sin(x[0]), 0, 0}; });
  const VelocityHistory hist({VectorField(g), VectorField(g)}, 0.1);
  EXPECT_THROW(evolve_induction(H0, hist, 0.1), std::invalid_argument);
}

TEST(Induction, AgreesWithEulerianBackend) {
  const Grid g = Grid::cube(16);
  const auto hist = smooth_history(g, 0.1, 0.01);
  const auto H0 = solenoidal_field(g);
  const auto sl = evolve_induction(H0, hist, 0.1);
  const auto eu = evolve_induction_eulerian(H0, hist, 0.1);
  const VectorField diff = sl.levels.back() - eu.levels.back();
  EXPECT_LT(lp_norm(diff, 2.0), 1e-3 * lp_norm(sl.levels.back(), 2.0));
}

TEST(Lorentz, UniformFieldHasNoForce) {
  const Grid g = Grid::cube(8);
  EXPECT_LT(max_abs(lorentz_force(VectorField(g, {1.0, 2.0, -0.5}))), 1e-14);
}

TEST(Lorentz, SingleModeByHand) {
  const Grid g = Grid::cube(16);
  const auto H = VectorField::from_function(g, [](const Vec3& x) { return Vec3{0, 0, std::sin(x[0])}; });
  const auto f = lorentz_force(H);
  const auto expect = ScalarField::from_function(g, [](const Vec3& x) { return -0.5 * std::sin(2 * x[0]); });
  EXPECT_LT(max_diff(f[0], expect), 1e-13);
  EXPECT_LT(f[1].max_abs(), 1e-14);
  EXPECT_LT(f[2].max_abs(), 1e-14);
  EXPECT_LT(max_diff(lorentz_force_gradient_form(H), f), 1e-13);
}

TEST(Lorentz, CurlAndGradientFormsAgree) {
  // modes below N/4 keep the quadratic products resolved
  const Grid g = Grid::cube(16);
  const auto H = random_smooth_vector(g, 14, 3);
  const auto a = lorentz_force(H), b = lorentz_force_gradient_form(H);
  EXPECT_LT(lp_norm(a - b, 2.0), 1e-10 * lp_norm(a, 2.0));
}
