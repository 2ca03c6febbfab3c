#include "zmhd/induction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "zmhd/spectral.hpp"

namespace zmhd {
namespace {

std::size_t level_count(const VelocityHistory& u, double t) {
  if (u.is_steady()) throw std::invalid_argument("induction: needs a time-indexed history");
  if (t < 0.0 || t > u.final_time() * (1.0 + 1e-12)) throw std::invalid_argument("induction: t outside history");
  return static_cast<std::size_t>(std::llround(t / u.dt())) + 1;
}

void record(MagneticSolution& sol, const VectorField& H, double q) {
  sol.divergence.push_back(lp_norm(spectral::divergence(H), 2.0));
  sol.norms.push_back(norms(H, q));
  sol.levels.push_back(H);
}

VectorField curl_u_cross_H(const VectorField& u, const VectorField& H) { return fd4::curl(cross(u, H)); }

}  // namespace

MatrixField stretching_matrix(const VectorField& u) {
  return spectral::vector_gradient(u).minus_trace_identity();
}

double magnetic_growth_rate(const Mat3& g, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("magnetic growth: p must lie in [2, inf]");
  const double div = g[0] + g[4] + g[8];
  double frob = 0.0;
  for (int e = 0; e < 9; ++e) {
    const double s = g[e] - ((e % 4 == 0) ? div : 0.0);
    frob += s * s;
  }
  return (std::isinf(p) ? 0.0 : std::abs(div) / p) + std::sqrt(frob);
}

VectorField advect_magnetic(const VectorField& H, const CharacteristicField& chars) {
  require_same_grid(H.grid(), chars.grid, "advect_magnetic");
  if (chars.propagator.empty()) throw std::invalid_argument("advect_magnetic: characteristics lack a propagator");
  const VectorSpline s(H);
  VectorField out(H.grid());
  for (std::size_t n = 0; n < out.grid().size(); ++n) {
    const Vec3 h = chars.departure[n] == H.grid().node(n) ? H.at(n) : s.value(chars.departure[n]);
    const Mat3& m = chars.propagator[n];
    out.set(n, {m[0] * h[0] + m[1] * h[1] + m[2] * h[2], m[3] * h[0] + m[4] * h[1] + m[5] * h[2],
                m[6] * h[0] + m[7] * h[1] + m[8] * h[2]});
  }
  if (chars.H_source) out += *chars.H_source;
  return out;
}

MagneticSolution evolve_induction(const VectorField& H0, const VelocityHistory& u, double t,
                                  const InductionOptions& opts) {
  require_same_grid(H0.grid(), u.grid(), "evolve_induction");
  if (!H0.is_finite()) throw std::invalid_argument("evolve_induction: non-finite initial field");
  const std::size_t levels = level_count(u, t);
  MagneticSolution sol;
  record(sol, H0, opts.q);
  if (sol.divergence[0] > opts.divergence_tolerance) {
    throw std::invalid_argument("evolve_induction: |div H0|_2 = " + std::to_string(sol.divergence[0]) +
                                " exceeds tolerance");
  }
  TraceOptions trace = opts.trace;
  trace.propagator = true;
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const auto chars = backtrace(u, (k + 1) * u.dt(), k * u.dt(), trace);
    record(sol, advect_magnetic(sol.levels.back(), chars), opts.q);
  }
  return sol;
}

std::vector<double> divergence_monitor(const MagneticSolution& sol) { return sol.divergence; }

MagneticSolution evolve_induction_eulerian(const VectorField& H0, const VelocityHistory& u, double t,
                                           int substeps, double q) {
  const std::size_t levels = level_count(u, t);
  const double h = u.dt() / substeps;
  MagneticSolution sol;
  record(sol, H0, q);
  VectorField H = H0;
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    for (int s = 0; s < substeps; ++s) {
      const double t0 = k * u.dt() + s * h;
      const VectorField u0 = u.at(t0), u1 = u.at(t0 + h), uh = u.at(t0 + 0.5 * h);
      VectorField h1 = H + h * curl_u_cross_H(u0, H);
      VectorField h2 = 0.75 * H + 0.25 * (h1 + h * curl_u_cross_H(u1, h1));
      H = (1.0 / 3.0) * H + (2.0 / 3.0) * (h2 + h * curl_u_cross_H(uh, h2));
    }
    record(sol, H, q);
  }
  return sol;
}

Vec3 evolve_uniform_field(const std::function<Mat3(double)>& grad_u, const Vec3& H0, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("evolve_uniform_field: steps must be positive");
  auto rhs = [&](double tau, const Vec3& h) {
    Mat3 g = grad_u(tau);
    const double div = g[0] + g[4] + g[8];
    g[0] -= div;
    g[4] -= div;
    g[8] -= div;
    return Vec3{g[0] * h[0] + g[1] * h[1] + g[2] * h[2], g[3] * h[0] + g[4] * h[1] + g[5] * h[2],
                g[6] * h[0] + g[7] * h[1] + g[8] * h[2]};
  };
  const double dt = t / steps;
  Vec3 H = H0;
  for (int s = 0; s < steps; ++s) {
    const double tau = s * dt;
    auto shift = [](const Vec3& a, double c, const Vec3& b) {
      return Vec3{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
    };
    const Vec3 k1 = rhs(tau, H);
    const Vec3 k2 = rhs(tau + 0.5 * dt, shift(H, 0.5 * dt, k1));
    const Vec3 k3 = rhs(tau + 0.5 * dt, shift(H, 0.5 * dt, k2));
    const Vec3 k4 = rhs(tau + dt, shift(H, dt, k3));
    for (int a = 0; a < 3; ++a) H[a] += dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
  }
  return H;
}

VectorField lorentz_force(const VectorField& H) { return cross(spectral::curl(H), H); }

VectorField lorentz_force_gradient_form(const VectorField& H) {
  const MatrixField g = spectral::vector_gradient(H);
  VectorField out = g.apply(H);
  out.axpy(-0.5, spectral::gradient(dot(H, H)));
  return out;
}

double magnetic_growth_bound(const VelocityHistory& u, double t, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("magnetic_growth_bound: p must lie in [2, inf]");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  std::vector<double> rate(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) rate[k] = inv_p * u.max_divergence()[k] + u.max_stretching()[k];
  return std::exp(u.integrate(rate, 0.0, t));
}

}  // namespace zmhd
