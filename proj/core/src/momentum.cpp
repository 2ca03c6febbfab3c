#include "zmhd/momentum.hpp"

#include <cmath>
#include <string>

#include "zmhd/induction.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/spectral.hpp"

namespace zmhd {

MomentumOperator::MomentumOperator(ScalarField rho, double dt, double mu, double lambda)
    : weight_(std::move(rho)), dt_(dt), mu_(mu), lambda_(lambda) {
  if (!(dt > 0.0)) throw std::invalid_argument("MomentumOperator: dt must be positive");
  PhysicsConfig{1.0, 2.0, mu, lambda}.validate();
  if (!(weight_.min() > 0.0)) throw std::invalid_argument("MomentumOperator: density must be positive");
  weight_ *= 1.0 / dt;
  mean_weight_ = weight_.mean();
}

VectorField MomentumOperator::apply(const VectorField& u) const {
  require_same_grid(grid(), u.grid(), "MomentumOperator::apply");
  VectorField out = scale_pointwise(weight_, u);
  out.axpy(-mu_, spectral::laplacian(u));
  out.axpy(-(lambda_ + mu_), spectral::grad_div(u));
  return out;
}

VectorField MomentumOperator::precondition(const VectorField& r) const {
  const Grid& g = grid();
  std::array<spectral::Spectrum, 3> s{spectral::Spectrum(r[0]), spectral::Spectrum(r[1]),
                                      spectral::Spectrum(r[2])};
  const double b = lambda_ + mu_;
  std::size_t idx = 0;
  for (int i = 0; i < g.dim(0); ++i) {
    const double kx = spectral::Spectrum::wavenumber(g, 0, i, false);
    const double dx = spectral::Spectrum::wavenumber(g, 0, i, true);
    for (int j = 0; j < g.dim(1); ++j) {
      const double ky = spectral::Spectrum::wavenumber(g, 1, j, false);
      const double dy = spectral::Spectrum::wavenumber(g, 1, j, true);
      for (int k = 0; k < g.dim(2) / 2 + 1; ++k, ++idx) {
        const double kz = spectral::Spectrum::wavenumber(g, 2, k, false);
        const double dz = spectral::Spectrum::wavenumber(g, 2, k, true);
        // (a I + b d d^T)^{-1} = (I - b d d^T / (a + b |d|^2)) / a
        const double a = mean_weight_ + mu_ * (kx * kx + ky * ky + kz * kz);
        const double d[3] = {dx, dy, dz};
        const double d2 = dx * dx + dy * dy + dz * dz;
        const std::complex<double> dr = dx * s[0].coeffs()[idx] + dy * s[1].coeffs()[idx] + dz * s[2].coeffs()[idx];
        const std::complex<double> corr = b * dr / (a + b * d2);
        for (int c = 0; c < 3; ++c) s[c].coeffs()[idx] = (s[c].coeffs()[idx] - d[c] * corr) / a;
      }
    }
  }
  return VectorField(s[0].to_field(), s[1].to_field(), s[2].to_field());
}

MomentumSolve solve_momentum_step(const MomentumOperator& op, const VectorField& rhs, double tol, int max_iters,
                                  const VectorField* guess, bool precondition) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_momentum_step: tol must be positive");
  require_same_grid(op.grid(), rhs.grid(), "solve_momentum_step");
  const double bnorm = std::sqrt(inner(rhs, rhs));
  MomentumSolve out{guess != nullptr ? *guess : VectorField(op.grid()), 0, 0.0};
  if (bnorm == 0.0) {
    out.u = VectorField(op.grid());
    return out;
  }
  VectorField r = rhs - op.apply(out.u);
  double rnorm = std::sqrt(inner(r, r));
  if (rnorm <= tol * bnorm) {
    out.residual = rnorm / bnorm;
    return out;
  }
  VectorField z = precondition ? op.precondition(r) : r;
  VectorField p = z;
  double rz = inner(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    const VectorField ap = op.apply(p);
    const double alpha = rz / inner(p, ap);
    out.u.axpy(alpha, p);
    r.axpy(-alpha, ap);
    rnorm = std::sqrt(inner(r, r));
    out.iterations = it;
    if (rnorm <= tol * bnorm) {
      out.residual = rnorm / bnorm;
      return out;
    }
    z = precondition ? op.precondition(r) : r;
    const double rz_new = inner(r, z);
    p *= rz_new / rz;
    p += z;
    rz = rz_new;
  }
  throw SolverError("momentum solve did not converge in " + std::to_string(max_iters) +
                        " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")",
                    rnorm / bnorm);
}

VectorField build_rhs(const ScalarField& rho, const VectorField& ubar, const VectorField& H,
                      const VectorField& u_prev, const PhysicsConfig& cfg, double dt, const VectorField* source) {
  require_same_grid(rho.grid(), ubar.grid(), "build_rhs");
  require_same_grid(rho.grid(), H.grid(), "build_rhs");
  require_same_grid(rho.grid(), u_prev.grid(), "build_rhs");
  if (!(rho.min() > 0.0)) throw std::invalid_argument("build_rhs: density must be positive");
  const VectorField convection = spectral::vector_gradient(ubar).apply(ubar);
  VectorField out = scale_pointwise(rho, u_prev * (1.0 / dt) - convection);
  out -= spectral::gradient(cfg.pressure(rho));
  out += lorentz_force(H);
  if (source != nullptr) out += *source;
  return out;
}

VectorField momentum_force(const ScalarField& rho, const VectorField& u, const VectorField& H,
                           const PhysicsConfig& cfg) {
  VectorField out = scale_pointwise(rho, spectral::vector_gradient(u).apply(u)) * -1.0;
  out -= spectral::gradient(cfg.pressure(rho));
  out.axpy(cfg.mu, spectral::laplacian(u));
  out.axpy(cfg.lambda + cfg.mu, spectral::grad_div(u));
  out += lorentz_force(H);
  return out;
}

AccelerationBound initial_acceleration_bound(const State& s0, const PhysicsConfig& cfg, double dt, double tol) {
  const double alpha = s0.rho.min();
  if (!(alpha > 0.0)) throw std::invalid_argument("initial_acceleration_bound: density must be positive");
  AccelerationBound b;
  b.viscous = cfg.mu * lp_norm(spectral::laplacian(s0.u), 2.0);
  b.compressive = std::abs(cfg.lambda + cfg.mu) * lp_norm(spectral::grad_div(s0.u), 2.0);
  b.convective = s0.rho.max_abs() * lp_norm(s0.u, kInf) * lp_norm(spectral::vector_gradient(s0.u), 2.0);
  b.pressure = cfg.max_pressure_derivative(s0.rho.min(), s0.rho.max()) * lp_norm(spectral::gradient(s0.rho), 2.0);
  b.magnetic = 2.0 * lp_norm(s0.H, kInf) * lp_norm(spectral::vector_gradient(s0.H), 2.0);
  b.bound = (b.viscous + b.compressive + b.convective + b.pressure + b.magnetic) / std::sqrt(alpha);

  // (rho0/dt - visc)(u1 - u0) = F(u0): the first step with every coefficient frozen at t = 0
  const MomentumOperator op(s0.rho, dt, cfg.mu, cfg.lambda);
  const VectorField force = momentum_force(s0.rho, s0.u, s0.H, cfg);
  const VectorField du = solve_momentum_step(op, force, tol).u;
  VectorField acc = du * (1.0 / dt);
  ScalarField sqrt_rho = s0.rho;
  for (double& v : sqrt_rho.values()) v = std::sqrt(v);
  b.actual = lp_norm(scale_pointwise(sqrt_rho, acc), 2.0);
  b.holds = b.actual <= b.bound * (1.0 + 1e-8) + 1e-12;
  return b;
}

}  // namespace zmhd
