#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zmhd/picard.hpp"

namespace zmhd {

/// amplitude * sin(k.x - omega t + phase)
struct ScalarMode {
  double amplitude = 0.0;
  Vec3 wavevector{};
  double omega = 0.0;
  double phase = 0.0;
};

/// direction * sin(k.x - omega t + phase); the direction carries the amplitude.
struct VectorMode {
  Vec3 direction{};
  Vec3 wavevector{};
  double omega = 0.0;
  double phase = 0.0;
};

/// A manufactured solution: mean values plus trigonometric modes.
struct ModeSpec {
  double rho_mean = 1.0;
  std::vector<ScalarMode> rho;
  Vec3 u_mean{};
  std::vector<VectorMode> u;
  Vec3 H_mean{};
  /// each direction must be orthogonal to its wavevector (div H = 0)
  std::vector<VectorMode> H;
};

/// Closed-form fields of a ModeSpec and the sources that make them an exact
/// solution of the forced system
///   rho_t + div(rho u) = S_rho
///   rho (u_t + u.grad u) + grad P - mu lap u - (lambda+mu) grad div u - (curl H) x H = S_u
///   H_t + u.grad H - (grad u - (div u) I) H = S_H
class ManufacturedCase {
public:
  ManufacturedCase(ModeSpec spec, PhysicsConfig physics);

  const ModeSpec& spec() const { return spec_; }
  const PhysicsConfig& physics() const { return physics_; }

  double rho(double t, const Vec3& x) const;
  Vec3 u(double t, const Vec3& x) const;
  Vec3 H(double t, const Vec3& x) const;

  double source_rho(double t, const Vec3& x) const;
  Vec3 source_u(double t, const Vec3& x) const;
  Vec3 source_H(double t, const Vec3& x) const;

  State state(const Grid& grid, double t) const;
  State initial_state(const Grid& grid) const { return state(grid, 0.0); }
  /// Sources in the form the solver consumes; keeps a copy of the case alive.
  Forcing forcing() const;

private:
  ModeSpec spec_;
  PhysicsConfig physics_;
};

/// Validates the mode set (rho* > 0 everywhere, div H* = 0) and builds the case.
ManufacturedCase build_case(const ModeSpec& spec, const PhysicsConfig& physics = {});

/// The single-mode case used for convergence studies: density and magnetic
/// modes carried by a uniform stream, plus a time-periodic velocity mode.
ManufacturedCase single_mode_case();

struct StudyConfig {
  double T = 0.04;
  /// spatial sweep: these resolutions at spatial_dt
  std::vector<int> resolutions{8, 12, 16};
  double spatial_dt = 5e-4;
  /// temporal sweep: these steps at temporal_resolution
  std::vector<double> dts{0.02, 0.01, 0.005};
  int temporal_resolution = 32;
  /// T and dt are overridden per run
  PicardConfig picard = [] {
    PicardConfig p;
    p.tol = 1e-10;
    p.cg_tol = 1e-12;
    return p;
  }();
};

struct ErrorRow {
  int N = 0;
  double dt = 0.0;
  /// discrete L2 errors against the exact solution at T
  double rho = 0.0;
  double u = 0.0;
  double H = 0.0;
  double total() const;
  int sweeps = 0;
  bool converged = false;
};

struct OrderTable {
  std::vector<ErrorRow> spatial;
  std::vector<ErrorRow> temporal;
  /// least-squares slopes of log(total error); empty when every error is at
  /// round-off level (nothing to fit)
  std::optional<double> spatial_order;
  std::optional<double> temporal_order;
  double seconds = 0.0;
};

ErrorRow measure_error(const ManufacturedCase& c, int N, double dt, double T, const PicardConfig& base);
OrderTable convergence_study(const ManufacturedCase& c, const StudyConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

/// CSV: sweep,N,dt,error_rho,error_u,error_H,error_total,order where order is
/// the fitted order of the row's sweep (blank when not applicable).
std::string to_csv(const OrderTable& table);

}  // namespace zmhd
