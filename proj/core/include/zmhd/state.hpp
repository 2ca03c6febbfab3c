#pragma once

#include <vector>

#include "zmhd/field.hpp"

namespace zmhd {

/// Isentropic pressure law P = A rho^gamma and viscosity coefficients.
struct PhysicsConfig {
  double A = 1.0;
  double gamma = 1.4;
  double mu = 1.0;
  double lambda = 0.0;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  double pressure(double rho) const;
  /// dP/drho
  double pressure_derivative(double rho) const;
  /// max of P' over [lo, hi] (P' is monotone, so an endpoint).
  double max_pressure_derivative(double lo, double hi) const;

  ScalarField pressure(const ScalarField& rho) const;
};

/// Density, velocity and magnetic field at one time level.
struct State {
  ScalarField rho;
  VectorField u;
  VectorField H;
  double t = 0.0;

  explicit State(const Grid& grid) : rho(grid, 1.0), u(grid), H(grid) {}
  State(ScalarField r, VectorField v, VectorField h, double time = 0.0)
      : rho(std::move(r)), u(std::move(v)), H(std::move(h)), t(time) {}

  const Grid& grid() const { return rho.grid(); }
  bool is_finite() const { return rho.is_finite() && u.is_finite() && H.is_finite(); }
};

/// States at t_k = k*dt, k = 0..K.
class Trajectory {
public:
  Trajectory() = default;
  explicit Trajectory(double dt) : dt_(dt) {}

  void push_back(State s) { states_.push_back(std::move(s)); }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  double dt() const { return dt_; }
  double final_time() const { return states_.empty() ? 0.0 : states_.back().t; }

  State& operator[](std::size_t k) { return states_[k]; }
  const State& operator[](std::size_t k) const { return states_[k]; }
  const State& front() const { return states_.front(); }
  const State& back() const { return states_.back(); }
  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

  std::vector<VectorField> velocities() const;

private:
  double dt_ = 0.0;
  std::vector<State> states_;
};

/// Space-time L2 norm over Q_T of a sequence of velocity levels (rectangle
/// rule in time, levels 1..K; level 0 is fixed data and does not contribute).
double spacetime_l2(const std::vector<VectorField>& levels, double dt);
double spacetime_l2_distance(const std::vector<VectorField>& a, const std::vector<VectorField>& b,
                             double dt);

}  // namespace zmhd
