#pragma once

#include "zmhd/state.hpp"

namespace zmhd {

/// Independent solver for the full nonlinear system: fourth-order central
/// differences in space and explicit SSP-RK3 in time, written in the
/// Eulerian form
///   rho_t = -div(rho u)
///   u_t = -u.grad u + (mu lap u + (lambda+mu) grad div u - grad P + (curl H) x H) / rho
///   H_t = curl(u x H)
/// Returns levels every dt up to T, each reached with `substeps` RK3 steps.
Trajectory solve_explicit_rk3(const State& initial, const PhysicsConfig& cfg, double T, double dt,
                              int substeps = 4);

/// Largest of the relative L2(Q_T) differences of rho, u and H between two
/// trajectories on the same time levels.
double trajectory_difference(const Trajectory& a, const Trajectory& b);

}  // namespace zmhd
