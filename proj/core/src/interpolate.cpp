#include "zmhd/interpolate.hpp"

#include <cmath>
#include <numbers>

#include "zmhd/spectral.hpp"

namespace zmhd {
namespace {

// Cubic B-spline weights and their derivatives (per unit grid spacing) for
// the four nodes i-1..i+2 around fractional offset t in [0,1).
struct AxisStencil {
  int base;
  std::array<double, 4> w;
  std::array<double, 4> dw;
};

AxisStencil axis_stencil(const Grid& g, int axis, double x) {
  const int n = g.dim(axis);
  double s = x / g.spacing(axis);
  s -= n * std::floor(s / n);
  double fl = std::floor(s);
  double t = s - fl;
  int i = static_cast<int>(fl);
  if (i >= n) i -= n;
  const double t2 = t * t, t3 = t2 * t, omt = 1.0 - t;
  AxisStencil st;
  st.base = i - 1;
  st.w = {omt * omt * omt / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
          (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0, t3 / 6.0};
  const double inv_h = 1.0 / g.spacing(axis);
  st.dw = {-0.5 * omt * omt * inv_h, (1.5 * t2 - 2.0 * t) * inv_h, (-1.5 * t2 + t + 0.5) * inv_h,
           0.5 * t2 * inv_h};
  return st;
}

struct Stencil {
  std::array<AxisStencil, 3> axis;
  std::array<std::array<int, 4>, 3> idx;

  Stencil(const Grid& g, const Vec3& x) {
    for (int a = 0; a < 3; ++a) {
      axis[a] = axis_stencil(g, a, x[a]);
      for (int m = 0; m < 4; ++m) idx[a][m] = g.wrap(axis[a].base + m, a);
    }
  }
};

// Accumulates value (and optionally gradient) of coefficient arrays at a stencil.
template <std::size_t K, bool Grad>
void accumulate(const Grid& g, const Stencil& st, const std::array<const double*, K>& c,
                std::array<double, K>& val, std::array<Vec3, K>& grad) {
  val.fill(0.0);
  if constexpr (Grad) grad.fill(Vec3{0.0, 0.0, 0.0});
  const std::size_t n1 = g.dim(1), n2 = g.dim(2);
  for (int a = 0; a < 4; ++a) {
    const double wa = st.axis[0].w[a];
    const double da = st.axis[0].dw[a];
    const std::size_t ia = static_cast<std::size_t>(st.idx[0][a]) * n1;
    for (int b = 0; b < 4; ++b) {
      const double wb = st.axis[1].w[b];
      const double db = st.axis[1].dw[b];
      const std::size_t row = (ia + st.idx[1][b]) * n2;
      for (int d = 0; d < 4; ++d) {
        const double wd = st.axis[2].w[d];
        const std::size_t n = row + st.idx[2][d];
        const double w = wa * wb * wd;
        for (std::size_t k = 0; k < K; ++k) {
          const double ck = c[k][n];
          val[k] += w * ck;
          if constexpr (Grad) {
            grad[k][0] += da * wb * wd * ck;
            grad[k][1] += wa * db * wd * ck;
            grad[k][2] += wa * wb * st.axis[2].dw[d] * ck;
          }
        }
      }
    }
  }
}

ScalarField prefilter(const ScalarField& f) {
  const Grid& g = f.grid();
  spectral::Spectrum s(f);
  std::array<std::vector<double>, 3> sym;
  for (int a = 0; a < 3; ++a) {
    const int n = g.dim(a);
    const int len = a == 2 ? n / 2 + 1 : n;
    sym[a].resize(len);
    for (int m = 0; m < len; ++m) {
      sym[a][m] = 2.0 / 3.0 + std::cos(2.0 * std::numbers::pi * m / n) / 3.0;
    }
  }
  auto& c = s.coeffs();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sym[0].size(); ++i) {
    for (std::size_t j = 0; j < sym[1].size(); ++j) {
      const double sij = sym[0][i] * sym[1][j];
      for (std::size_t k = 0; k < sym[2].size(); ++k, ++idx) c[idx] /= sij * sym[2][k];
    }
  }
  return s.to_field();
}

}  // namespace

Spline::Spline(const ScalarField& f) : coeffs_(prefilter(f)) {}

Spline Spline::lerp(const Spline& a, const Spline& b, double s) {
  ScalarField c = a.coeffs_ * (1.0 - s);
  c.axpy(s, b.coeffs_);
  return Spline(Coefficients{}, std::move(c));
}

double Spline::value(const Vec3& x) const {
  const Stencil st(grid(), x);
  std::array<double, 1> v;
  std::array<Vec3, 1> g;
  accumulate<1, false>(grid(), st, {coeffs_.values().data()}, v, g);
  return v[0];
}

double Spline::value(const Vec3& x, Vec3& grad) const {
  const Stencil st(grid(), x);
  std::array<double, 1> v;
  std::array<Vec3, 1> g;
  accumulate<1, true>(grid(), st, {coeffs_.values().data()}, v, g);
  grad = g[0];
  return v[0];
}

VectorSpline::VectorSpline(const VectorField& v)
    : comps_{Spline(v[0]), Spline(v[1]), Spline(v[2])} {}

VectorSpline VectorSpline::lerp(const VectorSpline& a, const VectorSpline& b, double s) {
  return VectorSpline(Spline::lerp(a.comps_[0], b.comps_[0], s), Spline::lerp(a.comps_[1], b.comps_[1], s),
                      Spline::lerp(a.comps_[2], b.comps_[2], s));
}

Vec3 VectorSpline::value(const Vec3& x) const {
  const Stencil st(grid(), x);
  std::array<double, 3> v;
  std::array<Vec3, 3> g;
  accumulate<3, false>(grid(), st,
                       {comps_[0].coefficients().values().data(), comps_[1].coefficients().values().data(),
                        comps_[2].coefficients().values().data()},
                       v, g);
  return {v[0], v[1], v[2]};
}

Vec3 VectorSpline::value(const Vec3& x, Mat3& jac) const {
  const Stencil st(grid(), x);
  std::array<double, 3> v;
  std::array<Vec3, 3> g;
  accumulate<3, true>(grid(), st,
                      {comps_[0].coefficients().values().data(), comps_[1].coefficients().values().data(),
                       comps_[2].coefficients().values().data()},
                      v, g);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) jac[3 * i + j] = g[i][j];
  }
  return {v[0], v[1], v[2]};
}

std::vector<double> interpolate(const ScalarField& f, std::span<const Vec3> points) {
  const Spline s(f);
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec3& x : points) out.push_back(s.value(x));
  return out;
}

}  // namespace zmhd
