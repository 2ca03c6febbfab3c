#include "zmhd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace zmhd::spectral {
namespace {

using cplx = std::complex<double>;

// Real<->half-complex transforms for one grid shape. Buffers are owned by the
// plan so execution never depends on caller alignment.
class FftPlan {
public:
  explicit FftPlan(const std::array<int, 3>& dims)
      : n_real_(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]),
        n_cplx_(static_cast<std::size_t>(dims[0]) * dims[1] * (dims[2] / 2 + 1)) {
    real_ = fftw_alloc_real(n_real_);
    cplx_ = fftw_alloc_complex(n_cplx_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_3d(dims[0], dims[1], dims[2], real_, cplx_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_3d(dims[0], dims[1], dims[2], cplx_, real_, FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  void forward(std::span<const double> in, std::vector<cplx>& out) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    out.resize(n_cplx_);
    const auto* src = reinterpret_cast<const cplx*>(cplx_);
    std::copy(src, src + n_cplx_, out.begin());
  }

  // Normalized inverse.
  void backward(const std::vector<cplx>& in, std::vector<double>& out) {
    std::copy(in.begin(), in.end(), reinterpret_cast<cplx*>(cplx_));
    fftw_execute(backward_);
    out.resize(n_real_);
    const double scale = 1.0 / static_cast<double>(n_real_);
    for (std::size_t n = 0; n < n_real_; ++n) out[n] = real_[n] * scale;
  }

private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_real_;
  std::size_t n_cplx_;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

FftPlan& plan_for(const Grid& grid) {
  thread_local std::map<std::array<int, 3>, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[grid.dims()];
  if (!slot) slot = std::make_unique<FftPlan>(grid.dims());
  return *slot;
}

struct Wavenumbers {
  std::array<std::vector<double>, 3> full;
  std::array<std::vector<double>, 3> deriv;
};

Wavenumbers wavenumbers(const Grid& grid) {
  Wavenumbers w;
  for (int a = 0; a < 3; ++a) {
    const int n = a == 2 ? grid.dim(2) / 2 + 1 : grid.dim(a);
    w.full[a].resize(n);
    w.deriv[a].resize(n);
    for (int m = 0; m < n; ++m) {
      w.full[a][m] = Spectrum::wavenumber(grid, a, m, false);
      w.deriv[a][m] = Spectrum::wavenumber(grid, a, m, true);
    }
  }
  return w;
}

// Visits every half-complex coefficient with its (kx, ky, kz) index triple.
template <class F>
void for_each_mode(const Grid& grid, F&& f) {
  const int n0 = grid.dim(0), n1 = grid.dim(1), nh = grid.dim(2) / 2 + 1;
  std::size_t idx = 0;
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < nh; ++k, ++idx) f(idx, i, j, k);
    }
  }
}

}  // namespace

Spectrum::Spectrum(const ScalarField& f) : grid_(f.grid()) {
  plan_for(grid_).forward(f.values(), coeffs_);
}

Spectrum::Spectrum(const Grid& grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  const std::size_t expect = static_cast<std::size_t>(grid.dim(0)) * grid.dim(1) * (grid.dim(2) / 2 + 1);
  if (coeffs_.size() != expect) throw std::invalid_argument("Spectrum: coefficient count mismatch");
}

ScalarField Spectrum::to_field() const {
  std::vector<double> values;
  plan_for(grid_).backward(coeffs_, values);
  return ScalarField(grid_, std::move(values));
}

double Spectrum::wavenumber(const Grid& grid, int axis, int m, bool derivative) {
  const int n = grid.dim(axis);
  const double base = 2.0 * std::numbers::pi / grid.length(axis);
  if (n % 2 == 0 && m == n / 2) return derivative ? 0.0 : base * (n / 2);
  const int signed_m = m <= n / 2 ? m : m - n;
  return base * signed_m;
}

ScalarField derivative(const ScalarField& f, int axis) {
  Spectrum s(f);
  const Wavenumbers w = wavenumbers(f.grid());
  auto& c = s.coeffs();
  for_each_mode(f.grid(), [&](std::size_t idx, int i, int j, int k) {
    const int m[3] = {i, j, k};
    c[idx] *= cplx(0.0, w.deriv[axis][m[axis]]);
  });
  return s.to_field();
}

VectorField gradient(const ScalarField& f) {
  const Spectrum s(f);
  const Wavenumbers w = wavenumbers(f.grid());
  std::array<ScalarField, 3> out{ScalarField(f.grid()), ScalarField(f.grid()), ScalarField(f.grid())};
  for (int a = 0; a < 3; ++a) {
    Spectrum d = s;
    auto& c = d.coeffs();
    for_each_mode(f.grid(), [&](std::size_t idx, int i, int j, int k) {
      const int m[3] = {i, j, k};
      c[idx] *= cplx(0.0, w.deriv[a][m[a]]);
    });
    out[a] = d.to_field();
  }
  return VectorField(std::move(out[0]), std::move(out[1]), std::move(out[2]));
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  const Wavenumbers w = wavenumbers(g);
  std::array<Spectrum, 3> s{Spectrum(v[0]), Spectrum(v[1]), Spectrum(v[2])};
  std::vector<cplx> acc(s[0].coeffs().size());
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    acc[idx] = cplx(0.0, w.deriv[0][i]) * s[0].coeffs()[idx] +
               cplx(0.0, w.deriv[1][j]) * s[1].coeffs()[idx] +
               cplx(0.0, w.deriv[2][k]) * s[2].coeffs()[idx];
  });
  return Spectrum(g, std::move(acc)).to_field();
}

VectorField curl(const VectorField& v) {
  const Grid& g = v.grid();
  const Wavenumbers w = wavenumbers(g);
  std::array<Spectrum, 3> s{Spectrum(v[0]), Spectrum(v[1]), Spectrum(v[2])};
  std::array<std::vector<cplx>, 3> out;
  for (auto& o : out) o.resize(s[0].coeffs().size());
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const cplx dx(0.0, w.deriv[0][i]), dy(0.0, w.deriv[1][j]), dz(0.0, w.deriv[2][k]);
    const cplx a = s[0].coeffs()[idx], b = s[1].coeffs()[idx], c = s[2].coeffs()[idx];
    out[0][idx] = dy * c - dz * b;
    out[1][idx] = dz * a - dx * c;
    out[2][idx] = dx * b - dy * a;
  });
  return VectorField(Spectrum(g, std::move(out[0])).to_field(), Spectrum(g, std::move(out[1])).to_field(),
                     Spectrum(g, std::move(out[2])).to_field());
}

MatrixField vector_gradient(const VectorField& v) {
  MatrixField out(v.grid());
  for (int i = 0; i < 3; ++i) {
    VectorField gi = gradient(v[i]);
    for (int j = 0; j < 3; ++j) out(i, j) = std::move(gi[j]);
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  Spectrum s(f);
  const Wavenumbers w = wavenumbers(f.grid());
  auto& c = s.coeffs();
  for_each_mode(f.grid(), [&](std::size_t idx, int i, int j, int k) {
    c[idx] *= -(w.full[0][i] * w.full[0][i] + w.full[1][j] * w.full[1][j] + w.full[2][k] * w.full[2][k]);
  });
  return s.to_field();
}

VectorField laplacian(const VectorField& v) {
  return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

VectorField grad_div(const VectorField& v) {
  const Grid& g = v.grid();
  const Wavenumbers w = wavenumbers(g);
  std::array<Spectrum, 3> s{Spectrum(v[0]), Spectrum(v[1]), Spectrum(v[2])};
  std::array<std::vector<cplx>, 3> out;
  for (auto& o : out) o.resize(s[0].coeffs().size());
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const double kd[3] = {w.deriv[0][i], w.deriv[1][j], w.deriv[2][k]};
    const cplx div = cplx(0.0, kd[0]) * s[0].coeffs()[idx] + cplx(0.0, kd[1]) * s[1].coeffs()[idx] +
                     cplx(0.0, kd[2]) * s[2].coeffs()[idx];
    for (int a = 0; a < 3; ++a) out[a][idx] = cplx(0.0, kd[a]) * div;
  });
  return VectorField(Spectrum(g, std::move(out[0])).to_field(), Spectrum(g, std::move(out[1])).to_field(),
                     Spectrum(g, std::move(out[2])).to_field());
}

std::array<ScalarField, 6> hessian(const ScalarField& f) {
  const Spectrum s(f);
  const Wavenumbers w = wavenumbers(f.grid());
  constexpr int pairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  std::array<ScalarField, 6> out{ScalarField(f.grid()), ScalarField(f.grid()), ScalarField(f.grid()),
                                 ScalarField(f.grid()), ScalarField(f.grid()), ScalarField(f.grid())};
  for (int p = 0; p < 6; ++p) {
    const int a = pairs[p][0], b = pairs[p][1];
    Spectrum d = s;
    auto& c = d.coeffs();
    for_each_mode(f.grid(), [&](std::size_t idx, int i, int j, int k) {
      const int m[3] = {i, j, k};
      const double sym = a == b ? -w.full[a][m[a]] * w.full[a][m[a]] : -w.deriv[a][m[a]] * w.deriv[b][m[b]];
      c[idx] *= sym;
    });
    out[p] = d.to_field();
  }
  return out;
}

VectorField helmholtz_project(const VectorField& v) {
  const Grid& g = v.grid();
  const Wavenumbers w = wavenumbers(g);
  std::array<Spectrum, 3> s{Spectrum(v[0]), Spectrum(v[1]), Spectrum(v[2])};
  for_each_mode(g, [&](std::size_t idx, int i, int j, int k) {
    const double kd[3] = {w.deriv[0][i], w.deriv[1][j], w.deriv[2][k]};
    const double k2 = kd[0] * kd[0] + kd[1] * kd[1] + kd[2] * kd[2];
    if (k2 == 0.0) return;
    const cplx kv = kd[0] * s[0].coeffs()[idx] + kd[1] * s[1].coeffs()[idx] + kd[2] * s[2].coeffs()[idx];
    for (int a = 0; a < 3; ++a) s[a].coeffs()[idx] -= kd[a] * kv / k2;
  });
  return VectorField(s[0].to_field(), s[1].to_field(), s[2].to_field());
}

}  // namespace zmhd::spectral

// ---------------------------------------------------------------------------

namespace zmhd::fd4 {
namespace {

template <class Stencil>
ScalarField apply_stencil(const ScalarField& f, int axis, Stencil&& st) {
  const Grid& g = f.grid();
  ScalarField out(g);
  const int n0 = g.dim(0), n1 = g.dim(1), n2 = g.dim(2);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < n2; ++k) {
        auto at = [&](int o) {
          int idx[3] = {i, j, k};
          idx[axis] += o;
          return f.at(idx[0], idx[1], idx[2]);
        };
        out.at(i, j, k) = st(at);
      }
    }
  }
  return out;
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  const double h = f.grid().spacing(axis);
  return apply_stencil(f, axis, [h](auto&& at) {
    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  });
}

ScalarField second_derivative(const ScalarField& f, int axis) {
  const double h = f.grid().spacing(axis);
  return apply_stencil(f, axis, [h](auto&& at) {
    return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
  });
}

VectorField gradient(const ScalarField& f) {
  return VectorField(derivative(f, 0), derivative(f, 1), derivative(f, 2));
}

ScalarField divergence(const VectorField& v) {
  return derivative(v[0], 0) + derivative(v[1], 1) + derivative(v[2], 2);
}

VectorField curl(const VectorField& v) {
  return VectorField(derivative(v[2], 1) - derivative(v[1], 2), derivative(v[0], 2) - derivative(v[2], 0),
                     derivative(v[1], 0) - derivative(v[0], 1));
}

MatrixField vector_gradient(const VectorField& v) {
  MatrixField out(v.grid());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out(i, j) = derivative(v[i], j);
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  return second_derivative(f, 0) + second_derivative(f, 1) + second_derivative(f, 2);
}

VectorField laplacian(const VectorField& v) {
  return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

VectorField grad_div(const VectorField& v) { return gradient(divergence(v)); }

}  // namespace zmhd::fd4
