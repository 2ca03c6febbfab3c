#pragma once

#include <functional>
#include <vector>

#include "zmhd/norms.hpp"
#include "zmhd/transport.hpp"

namespace zmhd {

/// grad u - (div u) I; its trace is -2 div u.
MatrixField stretching_matrix(const VectorField& u);

/// Pointwise rate (1/p)|div u| + |grad u - (div u) I|_F of the L^p growth of H.
double magnetic_growth_rate(const Mat3& grad_u, double p);

struct MagneticSolution {
  std::vector<VectorField> levels;
  /// |div H|_2 per level
  std::vector<double> divergence;
  std::vector<NormSuite> norms;
};

struct InductionOptions {
  TraceOptions trace{4, true};
  /// Largest admissible |div H0|_2.
  double divergence_tolerance = 1e-6;
  double q = 6.0;
};

/// H(t_from, x) = M H(t_to, X) (+ forcing) for characteristics traced with
/// the propagator enabled.
VectorField advect_magnetic(const VectorField& H, const CharacteristicField& chars);

/// Semi-Lagrangian solve of H_t + u.grad H = (grad u - (div u) I) H over
/// the history levels up to time t.
MagneticSolution evolve_induction(const VectorField& H0, const VelocityHistory& u, double t,
                                  const InductionOptions& opts = {});

/// |div H(t_k)|_2 per level.
std::vector<double> divergence_monitor(const MagneticSolution& sol);

/// Fourth-order finite differences and SSP-RK3 for H_t = curl(u x H); the
/// independent cross-check of the characteristic scheme. `substeps` RK3
/// steps per history interval.
MagneticSolution evolve_induction_eulerian(const VectorField& H0, const VelocityHistory& u, double t,
                                           int substeps = 4, double q = 6.0);

/// Spatially uniform H under a prescribed velocity gradient G(t): RK4 for
/// dH/dt = (G - tr(G) I) H. Isolates the stretching ODE from interpolation.
Vec3 evolve_uniform_field(const std::function<Mat3(double)>& grad_u, const Vec3& H0, double t, int steps);

/// (curl H) x H
VectorField lorentz_force(const VectorField& H);
/// H.grad H - grad(|H|^2)/2, the same force in gradient form.
VectorField lorentz_force_gradient_form(const VectorField& H);

/// exp(int_0^t (1/p)|div u|_inf + |grad u - (div u) I|_inf), p in [2, inf].
double magnetic_growth_bound(const VelocityHistory& u, double t, double p);

}  // namespace zmhd
