#pragma once

#include <array>
#include <complex>
#include <vector>

#include "zmhd/field.hpp"

/// Pseudospectral (FFT) differential operators on the periodic box.
///
/// First derivatives drop the Nyquist mode on even axes so that every odd
/// operator is real and antisymmetric; pure second derivatives keep it. With
/// that convention curl(grad f) and div(curl v) vanish to round-off and the
/// discrete Laplacian is symmetric negative semi-definite.
namespace zmhd::spectral {

/// Half-complex spectrum of a real field (last axis truncated to n/2+1).
class Spectrum {
public:
  explicit Spectrum(const ScalarField& f);
  Spectrum(const Grid& grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const { return grid_; }
  std::vector<std::complex<double>>& coeffs() { return coeffs_; }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

  ScalarField to_field() const;

  /// Wavenumber along `axis` for spectral index m; `derivative` selects the
  /// first-derivative convention (zero at Nyquist).
  static double wavenumber(const Grid& grid, int axis, int m, bool derivative);

private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
/// (i,j) = d v_i / d x_j
MatrixField vector_gradient(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
/// grad(div v)
VectorField grad_div(const VectorField& v);
/// Second derivatives in the order xx, xy, xz, yy, yz, zz.
std::array<ScalarField, 6> hessian(const ScalarField& f);
/// Solenoidal part of v (mean kept), for preparing divergence-free data.
VectorField helmholtz_project(const VectorField& v);

}  // namespace zmhd::spectral

/// Fourth-order central differences: the independent derivative backend.
namespace zmhd::fd4 {

ScalarField derivative(const ScalarField& f, int axis);
ScalarField second_derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
MatrixField vector_gradient(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
VectorField grad_div(const VectorField& v);

}  // namespace zmhd::fd4
