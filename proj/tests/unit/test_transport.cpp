#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "zmhd/spectral.hpp"
#include "zmhd/transport.hpp"

using namespace zmhd;
using zmhd::testing::max_diff;
using zmhd::testing::random_smooth;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

VectorField sine_velocity(const Grid& g, double amp = 0.1) {
  return VectorField::from_function(g, [amp](const Vec3& x) { return Vec3{amp * std::sin(x[0]), 0.0, 0.0}; });
}

// Independent oracle: RK4 with 400 steps on the closed-form velocity
// (0.1 sin x, 0, 0), returning the foot point and the divergence integral.
std::pair<double, double> fine_trace(double x, double t) {
  const int steps = 400;
  const double h = t / steps;
  double phi = 0.0;
  auto v = [](double y) { return -0.1 * std::sin(y); };
  auto d = [](double y) { return 0.1 * std::cos(y); };
  for (int s = 0; s < steps; ++s) {
    const double k1 = v(x), p1 = d(x);
    const double k2 = v(x + 0.5 * h * k1), p2 = d(x + 0.5 * h * k1);
    const double k3 = v(x + 0.5 * h * k2), p3 = d(x + 0.5 * h * k2);
    const double k4 = v(x + h * k3), p4 = d(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    phi += h / 6 * (p1 + 2 * p2 + 2 * p3 + p4);
  }
  return {x, phi};
}

VelocityHistory random_history(const Grid& g, int levels, double dt, unsigned seed, double amp) {
  std::vector<VectorField> lv;
  const auto a = zmhd::testing::random_smooth_vector(g, seed, 2, amp);
  const auto b = zmhd::testing::random_smooth_vector(g, seed + 7, 2, amp);
  for (int k = 0; k < levels; ++k) {
    const double s = static_cast<double>(k) / (levels - 1);
    lv.push_back(a * (1 - s) + b * s);
  }
  return VelocityHistory(std::move(lv), dt);
}

}  // namespace

TEST(Backtrace, ZeroVelocityKeepsNodes) {
  const Grid g = Grid::cube(8);
  const auto cf = backtrace(VelocityHistory::steady(VectorField(g)), 0.7, 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) EXPECT_EQ(cf.departure[n], g.node(n));
  EXPECT_EQ(cf.div_integral.max_abs(), 0.0);
}

TEST(Backtrace, ConstantVelocityTranslates) {
  const Grid g = Grid::cube(8);
  const auto cf = backtrace(VelocityHistory::steady(VectorField(g, {1.0, 0.0, 0.0})), 0.5, 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 x = g.node(n);
    EXPECT_NEAR(std::remainder(cf.departure[n][0] - (x[0] - 0.5), kTwoPi), 0.0, 1e-13);
    EXPECT_NEAR(cf.departure[n][1], x[1], 1e-14);
  }
  EXPECT_LT(cf.div_integral.max_abs(), 1e-14);
}

TEST(Backtrace, MatchesFineStepOracle) {
  const Grid g = Grid::cube(64);
  const auto cf = backtrace(VelocityHistory::steady(sine_velocity(g)), 0.5, 0.0);
  double ex = 0.0, ephi = 0.0;
  for (std::size_t n = 0; n < g.size(); n += 17) {
    const auto [x, phi] = fine_trace(g.node(n)[0], 0.5);
    ex = std::max(ex, std::abs(std::remainder(cf.departure[n][0] - x, kTwoPi)));
    ephi = std::max(ephi, std::abs(cf.div_integral[n] - phi));
  }
  EXPECT_LE(ex, 1e-8);
  EXPECT_LE(ephi, 1e-8);
}

TEST(Backtrace, RejectsReversedInterval) {
  const Grid g = Grid::cube(4);
  EXPECT_THROW(backtrace(VelocityHistory::steady(VectorField(g)), 0.0, 0.5), std::invalid_argument);
  VelocityHistory h({VectorField(g), VectorField(g)}, 0.1);
  EXPECT_THROW(backtrace(h, 0.3, 0.0), std::invalid_argument);
}

TEST(AdvectDensity, RestStaysUniform) {
  const Grid g = Grid::cube(8);
  const auto cf = backtrace(VelocityHistory::steady(VectorField(g)), 1.0, 0.0);
  const auto rho = advect_density(ScalarField(g, 1.0), cf);
  EXPECT_EQ(rho.min(), 1.0);
  EXPECT_EQ(rho.max(), 1.0);
}

TEST(AdvectDensity, TravelingWave) {
  const Grid g = Grid::cube(32);
  const auto rho0 = ScalarField::from_function(g, [](const Vec3& x) { return 2 + std::sin(x[0]); });
  const auto cf = backtrace(VelocityHistory::steady(VectorField(g, {1.0, 0.0, 0.0})), 0.3, 0.0);
  const auto rho = advect_density(rho0, cf);
  const auto exact = ScalarField::from_function(g, [](const Vec3& x) { return 2 + std::sin(x[0] - 0.3); });
  EXPECT_LT(max_diff(rho, exact), 1e-5);
}

TEST(AdvectDensity, SinusoidalVelocityMatchesOracle) {
  const Grid g = Grid::cube(32);
  const auto cf = backtrace(VelocityHistory::steady(sine_velocity(g)), 0.5, 0.0);
  const auto rho = advect_density(ScalarField(g, 1.0), cf);
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    err = std::max(err, std::abs(rho[n] - std::exp(-fine_trace(g.node(n)[0], 0.5).second)));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(AdvectDensity, RejectsNonPositiveDensity) {
  const Grid g = Grid::cube(4);
  const auto cf = backtrace(VelocityHistory::steady(VectorField(g)), 0.1, 0.0);
  ScalarField rho(g, 1.0);
  rho[3] = 0.0;
  EXPECT_THROW(advect_density(rho, cf), std::invalid_argument);
}

TEST(DensityEnvelope, ZeroVelocity) {
  const Grid g = Grid::cube(8);
  const auto rho0 = random_smooth(g, 4, 2, 0.2) + ScalarField(g, 1.0);
  const auto [lo, hi] = density_envelope(rho0, VelocityHistory::steady(VectorField(g)), 1.0);
  EXPECT_EQ(lo, rho0.min());
  EXPECT_EQ(hi, rho0.max());
}

TEST(DensityEnvelope, ScalarExample) {
  // |div u|_inf = 0.2 for u = (0.2 sin x, 0, 0); min rho0 = 0.5, max rho0 = 1
  const Grid g = Grid::cube(16);
  const auto rho0 = ScalarField::from_function(g, [](const Vec3& x) { return 0.75 + 0.25 * std::sin(x[1]); });
  const auto [lo, hi] = density_envelope(rho0, VelocityHistory::steady(sine_velocity(g, 0.2)), 1.0);
  EXPECT_NEAR(lo, 0.5 * std::exp(-0.2), 1e-12);
  EXPECT_NEAR(hi, std::exp(0.2), 1e-12);
  EXPECT_NEAR(lo, 0.40937, 1e-5);
  EXPECT_NEAR(hi, 1.22140, 1e-5);
}

TEST(DensityEnvelope, BracketsComputedDensity) {
  const Grid g = Grid::cube(32);
  const auto hist = random_history(g, 11, 0.05, 12, 0.3);
  const auto rho0 = ScalarField(g, 1.0) + random_smooth(g, 5, 2, 0.1);
  const auto sol = evolve_density(rho0, hist);
  for (std::size_t k = 0; k < sol.levels.size(); ++k) {
    const auto [lo, hi] = density_envelope(rho0, hist, k * hist.dt());
    EXPECT_GT(sol.min[k], 0.0);
    EXPECT_GE(sol.min[k], lo * (1 - 1e-3));
    EXPECT_LE(sol.max[k], hi * (1 + 1e-3));
    EXPECT_EQ(sol.min[k], sol.levels[k].min());
  }
}

TEST(Transport, SolenoidalVelocityConservesMass) {
  const Grid g = Grid::cube(16);
  const auto u = VectorField::from_function(
      g, [](const Vec3& x) { return Vec3{std::sin(x[1]), std::sin(x[2]), std::sin(x[0])}; });
  const VelocityHistory hist({u, u, u, u, u}, 0.05);
  const auto rho0 = ScalarField(g, 1.0) + random_smooth(g, 8, 2, 0.2);
  const auto sol = evolve_density(rho0, hist);
  EXPECT_NEAR(sol.mass.back(), sol.mass.front(), 1e-4 * sol.mass.front());
  const auto cf = backtrace(hist, 0.2, 0.0);
  EXPECT_LT(cf.div_integral.max_abs(), 1e-12);
}

TEST(DensityGradientStep, ZeroVelocityIsIdentity) {
  const Grid g = Grid::cube(8);
  const auto rho = ScalarField(g, 1.0) + random_smooth(g, 1, 2, 0.1);
  const auto grad = spectral::gradient(rho);
  const auto out = density_gradient_step(grad, rho, VectorField(g), 0.1);
  EXPECT_LT(max_diff(out, grad), 1e-13);
}

TEST(DensityGradientStep, ConstantVelocityTranslates) {
  const Grid g = Grid::cube(32);
  const auto rho = ScalarField::from_function(g, [](const Vec3& x) { return 2 + std::sin(x[0]); });
  const auto out = density_gradient_step(spectral::gradient(rho), rho, VectorField(g, {1.0, 0.0, 0.0}), 0.2);
  const auto exact = ScalarField::from_function(g, [](const Vec3& x) { return std::cos(x[0] - 0.2); });
  EXPECT_LT(max_diff(out[0], exact), 1e-5);
  EXPECT_LT(out[1].max_abs(), 1e-12);
}

TEST(DensityGradientStep, AgreesWithGradientOfCharacteristicDensity) {
  // The two routes differ only by discretization error, which must shrink
  // when dt and h are refined together.
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const Grid g = Grid::cube(16 << r);
    const double dt = 0.1 / (1 << r);
    const auto rho = ScalarField(g, 1.0) + random_smooth(g, 3, 2, 0.2);
    const auto u = zmhd::testing::random_smooth_vector(g, 9, 2, 0.3);
    const auto rho1 = advect_density(rho, backtrace(VelocityHistory::steady(u), dt, 0.0));
    const auto via_gradient = density_gradient_step(spectral::gradient(rho), rho, u, dt);
    err[r] = max_diff(via_gradient, spectral::gradient(rho1));
  }
  EXPECT_LT(err[1], 1e-4);
  EXPECT_LT(err[1], err[0] / 4);
}
