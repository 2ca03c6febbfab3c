#pragma once

#include <span>
#include <vector>

#include "zmhd/field.hpp"

namespace zmhd {

/// Periodic tricubic B-spline interpolant. Coefficients come from an exact
/// (FFT) prefilter, so the interpolant passes through every node and is C2
/// between them. Evaluation touches a 4x4x4 neighbourhood.
class Spline {
public:
  explicit Spline(const ScalarField& f);

  /// (1-s)*a + s*b, valid because the prefilter is linear.
  static Spline lerp(const Spline& a, const Spline& b, double s);

  const Grid& grid() const { return coeffs_.grid(); }
  const ScalarField& coefficients() const { return coeffs_; }

  double value(const Vec3& x) const;
  double value(const Vec3& x, Vec3& grad) const;

private:
  struct Coefficients {};
  Spline(Coefficients, ScalarField coeffs) : coeffs_(std::move(coeffs)) {}
  ScalarField coeffs_;
};

/// Three splines sharing one stencil computation per point.
class VectorSpline {
public:
  explicit VectorSpline(const VectorField& v);
  static VectorSpline lerp(const VectorSpline& a, const VectorSpline& b, double s);

  const Grid& grid() const { return comps_[0].grid(); }

  Vec3 value(const Vec3& x) const;
  /// Value and Jacobian J(i,j) = d v_i / d x_j.
  Vec3 value(const Vec3& x, Mat3& jac) const;

private:
  VectorSpline(Spline a, Spline b, Spline c) : comps_{std::move(a), std::move(b), std::move(c)} {}
  std::array<Spline, 3> comps_;
};

/// Spline values of f at arbitrary (periodically wrapped) points.
std::vector<double> interpolate(const ScalarField& f, std::span<const Vec3> points);

}  // namespace zmhd
