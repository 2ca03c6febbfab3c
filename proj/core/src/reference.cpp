#include "zmhd/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zmhd/spectral.hpp"

namespace zmhd {

namespace {

struct Rates {
  ScalarField rho;
  VectorField u;
  VectorField H;
};

Rates rates(const State& s, const PhysicsConfig& cfg) {
  const MatrixField grad_u = fd4::vector_gradient(s.u);
  Rates r{fd4::divergence(scale_pointwise(s.rho, s.u)) * -1.0, grad_u.apply(s.u) * -1.0,
          fd4::curl(cross(s.u, s.H))};
  VectorField force = fd4::laplacian(s.u) * cfg.mu;
  force.axpy(cfg.lambda + cfg.mu, fd4::grad_div(s.u));
  force -= fd4::gradient(cfg.pressure(s.rho));
  force += cross(fd4::curl(s.H), s.H);
  ScalarField inv = s.rho;
  for (auto& v : inv.values()) v = 1.0 / v;
  r.u += scale_pointwise(inv, std::move(force));
  return r;
}

// a*x + b*(y + h*r)
State combine(double a, const State& x, double b, const State& y, double h, const Rates& r) {
  State out = y;
  out.rho.axpy(h, r.rho);
  out.u.axpy(h, r.u);
  out.H.axpy(h, r.H);
  out.rho *= b;
  out.u *= b;
  out.H *= b;
  if (a != 0.0) {
    out.rho.axpy(a, x.rho);
    out.u.axpy(a, x.u);
    out.H.axpy(a, x.H);
  }
  return out;
}

}  // namespace

Trajectory solve_explicit_rk3(const State& initial, const PhysicsConfig& cfg, double T, double dt, int substeps) {
  cfg.validate();
  if (!(dt > 0.0) || !(T > 0.0) || substeps < 1) throw std::invalid_argument("solve_explicit_rk3: bad step settings");
  const int K = static_cast<int>(std::lround(T / dt));
  const double h = dt / substeps;
  Trajectory traj(dt);
  State s = initial;
  s.t = 0.0;
  traj.push_back(s);
  for (int n = 0; n < K; ++n) {
    for (int m = 0; m < substeps; ++m) {
      const State s1 = combine(0.0, s, 1.0, s, h, rates(s, cfg));
      const State s2 = combine(0.75, s, 0.25, s1, h, rates(s1, cfg));
      s = combine(1.0 / 3.0, s, 2.0 / 3.0, s2, h, rates(s2, cfg));
    }
    s.t = dt * (n + 1);
    if (!s.is_finite() || !(s.rho.min() > 0.0)) {
      throw std::runtime_error("solve_explicit_rk3: solution lost finiteness or positivity at t = " +
                               std::to_string(s.t));
    }
    traj.push_back(s);
  }
  return traj;
}

double trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trajectory_difference: level counts differ");
  double num[3] = {0, 0, 0}, den[3] = {0, 0, 0};
  for (std::size_t k = 1; k < a.size(); ++k) {
    num[0] += inner(a[k].rho - b[k].rho, a[k].rho - b[k].rho);
    den[0] += inner(a[k].rho, a[k].rho);
    num[1] += inner(a[k].u - b[k].u, a[k].u - b[k].u);
    den[1] += inner(a[k].u, a[k].u);
    num[2] += inner(a[k].H - b[k].H, a[k].H - b[k].H);
    den[2] += inner(a[k].H, a[k].H);
  }
  double worst = 0.0;
  for (int f = 0; f < 3; ++f) {
    if (num[f] > 0.0) worst = std::max(worst, den[f] > 0.0 ? std::sqrt(num[f] / den[f]) : std::sqrt(num[f]));
  }
  return worst;
}

}  // namespace zmhd
