#include "zmhd/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zmhd {

void PhysicsConfig::validate() const {
  if (!(A > 0.0)) throw std::invalid_argument("pressure constant A must be positive");
  if (!(gamma > 1.0)) {
    throw std::invalid_argument("adiabatic exponent gamma must exceed 1 (got " + std::to_string(gamma) + ")");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("viscosity constraint violated: need mu > 0");
  if (!(2.0 * mu + 3.0 * lambda > 0.0)) {
    throw std::invalid_argument("viscosity constraint violated: need 2*mu + 3*lambda > 0 (got " +
                                std::to_string(2.0 * mu + 3.0 * lambda) + ")");
  }
}

double PhysicsConfig::pressure(double rho) const { return A * std::pow(rho, gamma); }

double PhysicsConfig::pressure_derivative(double rho) const {
  return A * gamma * std::pow(rho, gamma - 1.0);
}

double PhysicsConfig::max_pressure_derivative(double lo, double hi) const {
  return std::max(pressure_derivative(lo), pressure_derivative(hi));
}

ScalarField PhysicsConfig::pressure(const ScalarField& rho) const {
  ScalarField p(rho.grid());
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = pressure(rho[n]);
  return p;
}

std::vector<VectorField> Trajectory::velocities() const {
  std::vector<VectorField> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(s.u);
  return out;
}

double spacetime_l2(const std::vector<VectorField>& levels, double dt) {
  double s = 0.0;
  for (std::size_t k = 1; k < levels.size(); ++k) s += inner(levels[k], levels[k]);
  return std::sqrt(s * dt);
}

double spacetime_l2_distance(const std::vector<VectorField>& a, const std::vector<VectorField>& b,
                             double dt) {
  if (a.size() != b.size()) throw std::invalid_argument("spacetime_l2_distance: level count mismatch");
  double s = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    const VectorField d = a[k] - b[k];
    s += inner(d, d);
  }
  return std::sqrt(s * dt);
}

}  // namespace zmhd
