#include "zmhd/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zmhd {

ScalarField::ScalarField(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ScalarField: value count does not match grid size");
  }
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(const Vec3&)>& f) {
  ScalarField out(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) out[n] = f(grid.node(n));
  return out;
}

bool ScalarField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::+=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::-=");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField::axpy");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += s * o.values_[n];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
  return out;
}

// ---------------------------------------------------------------------------

VectorField::VectorField(const Grid& grid, const Vec3& fill)
    : comps_{ScalarField(grid, fill[0]), ScalarField(grid, fill[1]), ScalarField(grid, fill[2])} {}

VectorField::VectorField(ScalarField c0, ScalarField c1, ScalarField c2)
    : comps_{std::move(c0), std::move(c1), std::move(c2)} {
  require_same_grid(comps_[0].grid(), comps_[1].grid(), "VectorField");
  require_same_grid(comps_[0].grid(), comps_[2].grid(), "VectorField");
}

VectorField VectorField::from_function(const Grid& grid,
                                       const std::function<Vec3(const Vec3&)>& f) {
  VectorField out(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) out.set(n, f(grid.node(n)));
  return out;
}

bool VectorField::is_finite() const {
  return comps_[0].is_finite() && comps_[1].is_finite() && comps_[2].is_finite();
}

ScalarField VectorField::magnitude() const {
  ScalarField out(grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::sqrt(comps_[0][n] * comps_[0][n] + comps_[1][n] * comps_[1][n] +
                       comps_[2][n] * comps_[2][n]);
  }
  return out;
}

double VectorField::max_magnitude() const { return magnitude().max(); }

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int c = 0; c < 3; ++c) comps_[c] += o.comps_[c];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int c = 0; c < 3; ++c) comps_[c] -= o.comps_[c];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

VectorField& VectorField::axpy(double s, const VectorField& o) {
  for (int c = 0; c < 3; ++c) comps_[c].axpy(s, o.comps_[c]);
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(VectorField a, double s) { return a *= s; }
VectorField operator*(double s, VectorField a) { return a *= s; }

VectorField scale_pointwise(const ScalarField& s, VectorField v) {
  require_same_grid(s.grid(), v.grid(), "scale_pointwise");
  for (int c = 0; c < 3; ++c) {
    for (std::size_t n = 0; n < s.size(); ++n) v[c][n] *= s[n];
  }
  return v;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField out(a.grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = a[0][n] * b[0][n] + a[1][n] * b[1][n] + a[2][n] * b[2][n];
  }
  return out;
}

VectorField cross(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "cross");
  VectorField out(a.grid());
  for (std::size_t n = 0; n < a.grid().size(); ++n) {
    out[0][n] = a[1][n] * b[2][n] - a[2][n] * b[1][n];
    out[1][n] = a[2][n] * b[0][n] - a[0][n] * b[2][n];
    out[2][n] = a[0][n] * b[1][n] - a[1][n] * b[0][n];
  }
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

// ---------------------------------------------------------------------------

MatrixField::MatrixField(const Grid& grid)
    : comps_{ScalarField(grid), ScalarField(grid), ScalarField(grid),
             ScalarField(grid), ScalarField(grid), ScalarField(grid),
             ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

Mat3 MatrixField::at(std::size_t node) const {
  Mat3 m{};
  for (int e = 0; e < 9; ++e) m[e] = comps_[e][node];
  return m;
}

bool MatrixField::is_finite() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const ScalarField& f) { return f.is_finite(); });
}

ScalarField MatrixField::trace() const { return comps_[0] + comps_[4] + comps_[8]; }

ScalarField MatrixField::frobenius() const {
  ScalarField out(grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    double s = 0.0;
    for (const auto& c : comps_) s += c[n] * c[n];
    out[n] = std::sqrt(s);
  }
  return out;
}

MatrixField MatrixField::minus_trace_identity() const {
  MatrixField out = *this;
  const ScalarField tr = trace();
  for (int d = 0; d < 3; ++d) out(d, d) -= tr;
  return out;
}

VectorField MatrixField::apply(const VectorField& v) const {
  require_same_grid(grid(), v.grid(), "MatrixField::apply");
  VectorField out(grid());
  for (std::size_t n = 0; n < grid().size(); ++n) {
    for (int i = 0; i < 3; ++i) {
      out[i][n] = comps_[3 * i][n] * v[0][n] + comps_[3 * i + 1][n] * v[1][n] +
                  comps_[3 * i + 2][n] * v[2][n];
    }
  }
  return out;
}

VectorField MatrixField::apply_transpose(const VectorField& v) const {
  require_same_grid(grid(), v.grid(), "MatrixField::apply_transpose");
  VectorField out(grid());
  for (std::size_t n = 0; n < grid().size(); ++n) {
    for (int j = 0; j < 3; ++j) {
      out[j][n] = comps_[j][n] * v[0][n] + comps_[3 + j][n] * v[1][n] + comps_[6 + j][n] * v[2][n];
    }
  }
  return out;
}

}  // namespace zmhd
