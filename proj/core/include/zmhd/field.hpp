#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "zmhd/grid.hpp"

namespace zmhd {

/// Real values on every node of a periodic grid.
class ScalarField {
public:
  explicit ScalarField(Grid grid, double fill = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  /// Samples f at every node.
  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(const Vec3&)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int i, int j, int k) { return values_[grid_.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool is_finite() const;
  double min() const;
  double max() const;
  double max_abs() const;
  double mean() const;
  /// Cell-volume weighted sum (midpoint quadrature of the integral).
  double integral() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o);

private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Three components on one grid (velocity, magnetic field, gradients).
class VectorField {
public:
  explicit VectorField(const Grid& grid, const Vec3& fill = {0.0, 0.0, 0.0});
  VectorField(ScalarField c0, ScalarField c1, ScalarField c2);

  static VectorField from_function(const Grid& grid,
                                   const std::function<Vec3(const Vec3&)>& f);

  const Grid& grid() const { return comps_[0].grid(); }
  ScalarField& operator[](int c) { return comps_[c]; }
  const ScalarField& operator[](int c) const { return comps_[c]; }

  Vec3 at(std::size_t node) const {
    return {comps_[0][node], comps_[1][node], comps_[2][node]};
  }
  void set(std::size_t node, const Vec3& v) {
    comps_[0][node] = v[0];
    comps_[1][node] = v[1];
    comps_[2][node] = v[2];
  }

  bool is_finite() const;
  /// Pointwise Euclidean magnitude.
  ScalarField magnitude() const;
  double max_magnitude() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  VectorField& axpy(double s, const VectorField& o);

private:
  std::array<ScalarField, 3> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(VectorField a, double s);
VectorField operator*(double s, VectorField a);
/// Each component multiplied pointwise by s.
VectorField scale_pointwise(const ScalarField& s, VectorField v);
ScalarField dot(const VectorField& a, const VectorField& b);
VectorField cross(const VectorField& a, const VectorField& b);
/// Discrete L2 inner product: cell volume times the nodal dot-product sum.
double inner(const VectorField& a, const VectorField& b);
double inner(const ScalarField& a, const ScalarField& b);

/// Nine components (i,j) on one grid; the velocity gradient stores
/// d u_i / d x_j at (i,j).
class MatrixField {
public:
  explicit MatrixField(const Grid& grid);

  const Grid& grid() const { return comps_[0].grid(); }
  ScalarField& operator()(int i, int j) { return comps_[3 * i + j]; }
  const ScalarField& operator()(int i, int j) const { return comps_[3 * i + j]; }

  Mat3 at(std::size_t node) const;
  bool is_finite() const;
  ScalarField trace() const;
  /// Pointwise Frobenius norm.
  ScalarField frobenius() const;
  /// M - tr(M) I, the stretching matrix when M is the velocity gradient.
  MatrixField minus_trace_identity() const;
  /// Pointwise M v.
  VectorField apply(const VectorField& v) const;
  /// Pointwise M^T v.
  VectorField apply_transpose(const VectorField& v) const;

private:
  std::array<ScalarField, 9> comps_;
};

}  // namespace zmhd
