#pragma once

#include <stdexcept>

#include "zmhd/state.hpp"

namespace zmhd {

/// A u = (rho/dt) u - mu lap u - (lambda+mu) grad div u, the implicit
/// viscous operator of one backward Euler step. Symmetric positive definite
/// whenever rho > 0, mu > 0 and 2 mu + 3 lambda > 0.
class MomentumOperator {
public:
  MomentumOperator(ScalarField rho, double dt, double mu, double lambda);

  const Grid& grid() const { return weight_.grid(); }
  /// rho/dt
  const ScalarField& weight() const { return weight_; }
  double dt() const { return dt_; }
  double mu() const { return mu_; }
  double lambda() const { return lambda_; }

  VectorField apply(const VectorField& u) const;
  /// Exact inverse of the operator with rho replaced by its mean.
  VectorField precondition(const VectorField& r) const;

private:
  ScalarField weight_;
  double dt_;
  double mu_;
  double lambda_;
  double mean_weight_;
};

struct MomentumSolve {
  VectorField u;
  int iterations = 0;
  /// final |A u - b|_2 / |b|_2
  double residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/// Preconditioned conjugate gradients to relative residual <= tol. Throws
/// SolverError (with the final residual) after max_iters.
MomentumSolve solve_momentum_step(const MomentumOperator& op, const VectorField& rhs, double tol = 1e-10,
                                  int max_iters = 500, const VectorField* guess = nullptr,
                                  bool precondition = true);

/// -rho ubar.grad ubar - grad P(rho) + (curl H) x H + (rho/dt) u_prev (+ source)
VectorField build_rhs(const ScalarField& rho, const VectorField& ubar, const VectorField& H,
                      const VectorField& u_prev, const PhysicsConfig& cfg, double dt,
                      const VectorField* source = nullptr);

/// -rho u.grad u - grad P + mu lap u + (lambda+mu) grad div u + (curl H) x H
VectorField momentum_force(const ScalarField& rho, const VectorField& u, const VectorField& H,
                           const PhysicsConfig& cfg);

struct AccelerationBound {
  double bound = 0.0;
  /// |sqrt(rho0) (u1 - u0)/dt|_2 from one frozen-coefficient backward Euler step
  double actual = 0.0;
  bool holds = true;
  // individual terms, before the alpha^{-1/2} factor
  double viscous = 0.0;
  double compressive = 0.0;
  double convective = 0.0;
  double pressure = 0.0;
  double magnetic = 0.0;
};

/// alpha^{-1/2} (mu|lap u0|_2 + |lambda+mu||grad div u0|_2 + |rho0|_inf|u0|_inf|grad u0|_2
///               + max P' |grad rho0|_2 + 2|H0|_inf|grad H0|_2)
AccelerationBound initial_acceleration_bound(const State& s0, const PhysicsConfig& cfg, double dt,
                                             double tol = 1e-10);

}  // namespace zmhd
