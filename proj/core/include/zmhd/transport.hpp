#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "zmhd/field.hpp"
#include "zmhd/interpolate.hpp"

namespace zmhd {

/// Velocity levels at t_k = t0 + k*dt, linear in time between levels. A
/// single level is treated as constant in time.
class VelocityHistory {
public:
  VelocityHistory(std::vector<VectorField> levels, double dt, double t0 = 0.0);
  static VelocityHistory steady(const VectorField& u);

  const Grid& grid() const { return levels_.front().grid(); }
  double dt() const { return dt_; }
  std::size_t size() const { return levels_.size(); }
  double start_time() const { return t0_; }
  /// Infinite for a steady (single-level) history.
  double final_time() const;
  bool is_steady() const { return levels_.size() == 1; }
  const VectorField& level(std::size_t k) const { return levels_[k]; }
  const std::vector<VectorField>& levels() const { return levels_; }

  VectorField at(double t) const;
  /// Spline interpolant of the velocity at time t.
  VectorSpline spline_at(double t) const;
  /// Splines of the spectral velocity gradient rows d(u_i)/dx at time t.
  std::array<VectorSpline, 3> gradient_splines_at(double t) const;
  const std::array<VectorSpline, 3>& gradient_splines(std::size_t k) const;

  /// |div u|_inf and |grad u - (div u) I|_inf (Frobenius) per level.
  const std::vector<double>& max_divergence() const { return max_div_; }
  const std::vector<double>& max_stretching() const { return max_stretch_; }
  /// Trapezoid integral over [t0, t1] of a per-level quantity, linear in
  /// time between levels.
  double integrate(const std::vector<double>& per_level, double t0, double t1) const;

private:
  std::pair<std::size_t, double> locate(double t) const;

  std::vector<VectorField> levels_;
  double dt_;
  double t0_;
  std::vector<VectorSpline> splines_;
  // Gradient splines are built on demand; stepping only touches two
  // neighbouring levels at a time, so a small cache suffices.
  mutable std::map<std::size_t, std::array<VectorSpline, 3>> gradient_cache_;
  std::vector<double> max_div_;
  std::vector<double> max_stretch_;
};

/// Forcing added to the transport and induction equations (manufactured
/// solutions only). Evaluated pointwise along characteristics.
struct CharacteristicSources {
  std::function<double(double, const Vec3&)> rho;
  std::function<Vec3(double, const Vec3&)> H;
};

enum class GradientSource {
  /// Jacobian of the velocity spline: the magnetic propagator is then the
  /// exact deformation of the traced flow map.
  SplineDerivative,
  /// Spline interpolation of the spectral velocity gradient.
  InterpolatedSpectral,
};

struct TraceOptions {
  int substeps = 4;
  bool propagator = false;
  GradientSource gradient = GradientSource::InterpolatedSpectral;
  const CharacteristicSources* sources = nullptr;
};

/// Characteristics ending at every node at t_from, traced back to t_to.
struct CharacteristicField {
  Grid grid;
  double t_from = 0.0;
  double t_to = 0.0;
  std::vector<Vec3> departure;
  /// integral of div u along the characteristic over [t_to, t_from]
  ScalarField div_integral;
  /// M with H(t_from, x) = M H(t_to, X) for the unforced induction system.
  std::vector<Mat3> propagator;
  /// Forcing contributions (empty without sources).
  std::optional<ScalarField> rho_source;
  std::optional<VectorField> H_source;
};

/// Backward RK4 trace of dX/dt = u(t, X) from t_from to t_to with `substeps`
/// steps per history interval; the divergence integral (and, when requested,
/// the magnetic propagator) ride along in the same integration.
CharacteristicField backtrace(const VelocityHistory& u, double t_from, double t_to,
                              const TraceOptions& opts = {});

/// rho(t_from) = rho0(X) exp(-int div u) (+ forcing).
ScalarField advect_density(const ScalarField& rho0, const CharacteristicField& chars);

/// Explicit bracket (min rho0 e^{-I}, max rho0 e^{I}), I = int_0^t |div u|_inf.
std::pair<double, double> density_envelope(const ScalarField& rho0, const VelocityHistory& u, double t);

/// One semi-Lagrangian step of the gradient transport system
///   G_t + u.grad G + (grad u)^T G + (div u) G + rho grad(div u) = 0
/// with u frozen over the step; rho is the density at the start of the step.
VectorField density_gradient_step(const VectorField& grad_rho, const ScalarField& rho, const VectorField& u,
                                  double dt, int substeps = 4);

struct DensitySolution {
  std::vector<ScalarField> levels;
  std::vector<double> min;
  std::vector<double> max;
  /// cell-volume sum of rho per level (drift is not corrected)
  std::vector<double> mass;
};

/// Level-by-level characteristic density solve over the whole history.
DensitySolution evolve_density(const ScalarField& rho0, const VelocityHistory& u, const TraceOptions& opts = {});

}  // namespace zmhd
