#include "zmhd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zmhd/spectral.hpp"

namespace zmhd {

VelocityHistory::VelocityHistory(std::vector<VectorField> levels, double dt, double t0)
    : levels_(std::move(levels)), dt_(dt), t0_(t0) {
  if (levels_.empty()) throw std::invalid_argument("VelocityHistory: no levels");
  if (levels_.size() > 1 && !(dt_ > 0.0)) throw std::invalid_argument("VelocityHistory: dt must be positive");
  splines_.reserve(levels_.size());
  for (const auto& v : levels_) {
    require_same_grid(grid(), v.grid(), "VelocityHistory");
    if (!v.is_finite()) throw std::invalid_argument("VelocityHistory: non-finite velocity sample");
    splines_.emplace_back(v);
    const MatrixField grad = spectral::vector_gradient(v);
    max_div_.push_back(grad.trace().max_abs());
    max_stretch_.push_back(grad.minus_trace_identity().frobenius().max_abs());
  }
}

VelocityHistory VelocityHistory::steady(const VectorField& u) { return VelocityHistory({u}, 0.0); }

double VelocityHistory::final_time() const {
  if (is_steady()) return std::numeric_limits<double>::infinity();
  return t0_ + dt_ * static_cast<double>(levels_.size() - 1);
}

std::pair<std::size_t, double> VelocityHistory::locate(double t) const {
  if (is_steady()) return {0, 0.0};
  t = std::clamp(t, t0_, final_time()) - t0_;
  auto k = static_cast<std::size_t>(std::floor(t / dt_));
  k = std::min(k, levels_.size() - 2);
  return {k, (t - static_cast<double>(k) * dt_) / dt_};
}

VectorField VelocityHistory::at(double t) const {
  const auto [k, s] = locate(t);
  if (s == 0.0) return levels_[k];
  VectorField v = levels_[k] * (1.0 - s);
  v.axpy(s, levels_[k + 1]);
  return v;
}

VectorSpline VelocityHistory::spline_at(double t) const {
  const auto [k, s] = locate(t);
  if (s == 0.0) return splines_[k];
  return VectorSpline::lerp(splines_[k], splines_[k + 1], s);
}

const std::array<VectorSpline, 3>& VelocityHistory::gradient_splines(std::size_t k) const {
  auto it = gradient_cache_.find(k);
  if (it != gradient_cache_.end()) return it->second;
  if (gradient_cache_.size() >= 4) gradient_cache_.clear();
  const MatrixField g = spectral::vector_gradient(levels_.at(k));
  auto row = [&](int i) { return VectorSpline(VectorField(g(i, 0), g(i, 1), g(i, 2))); };
  return gradient_cache_.emplace(k, std::array<VectorSpline, 3>{row(0), row(1), row(2)}).first->second;
}

std::array<VectorSpline, 3> VelocityHistory::gradient_splines_at(double t) const {
  const auto [k, s] = locate(t);
  if (s == 0.0) return gradient_splines(k);
  const auto a = gradient_splines(k);
  const auto& b = gradient_splines(k + 1);
  return {VectorSpline::lerp(a[0], b[0], s), VectorSpline::lerp(a[1], b[1], s), VectorSpline::lerp(a[2], b[2], s)};
}

double VelocityHistory::integrate(const std::vector<double>& f, double t0, double t1) const {
  if (f.size() != levels_.size()) throw std::invalid_argument("VelocityHistory::integrate: size mismatch");
  if (t1 < t0) return -integrate(f, t1, t0);
  if (is_steady()) return f[0] * (t1 - t0);
  auto value = [&](double t) {
    const auto [k, s] = locate(t);
    return (1.0 - s) * f[k] + (s == 0.0 ? 0.0 : s * f[k + 1]);
  };
  double sum = 0.0;
  double a = t0;
  while (a < t1) {
    const auto k = static_cast<double>(locate(a).first);
    double b = std::min(t1, t0_ + (k + 1.0) * dt_);
    if (b <= a) b = t1;
    sum += 0.5 * (b - a) * (value(a) + value(b));
    a = b;
  }
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kX = 0, kPhi = 3, kQ = 4, kM = 5, kR = 14, kDim = 17;
using Y = std::array<double, kDim>;

struct StageVelocity {
  double t;
  VectorSpline u;
  std::optional<std::array<VectorSpline, 3>> grad;
};

Mat3 mat_mul(const double* a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
    }
  }
  return c;
}

Vec3 velocity_and_gradient(const StageVelocity& sv, const Vec3& x, Mat3& jac) {
  if (!sv.grad) return sv.u.value(x, jac);
  for (int i = 0; i < 3; ++i) {
    const Vec3 row = (*sv.grad)[i].value(x);
    for (int j = 0; j < 3; ++j) jac[3 * i + j] = row[j];
  }
  return sv.u.value(x);
}

// d/d(sigma) of the augmented state in reversed time sigma = t_from - t.
Y reversed_rhs(const StageVelocity& sv, const Y& y, const TraceOptions& opts) {
  Y dy{};
  const Vec3 x{y[kX], y[kX + 1], y[kX + 2]};
  Mat3 jac;
  const Vec3 v = velocity_and_gradient(sv, x, jac);
  const double div = jac[0] + jac[4] + jac[8];
  for (int a = 0; a < 3; ++a) dy[kX + a] = -v[a];
  dy[kPhi] = div;
  const CharacteristicSources* src = opts.sources;
  if (src != nullptr && src->rho) dy[kQ] = src->rho(sv.t, x) * std::exp(-y[kPhi]);
  if (opts.propagator) {
    Mat3 s = jac;
    s[0] -= div;
    s[4] -= div;
    s[8] -= div;
    const Mat3 ms = mat_mul(&y[kM], s);
    std::copy(ms.begin(), ms.end(), dy.begin() + kM);
    if (src != nullptr && src->H) {
      const Vec3 f = src->H(sv.t, x);
      for (int i = 0; i < 3; ++i) {
        dy[kR + i] = y[kM + 3 * i] * f[0] + y[kM + 3 * i + 1] * f[1] + y[kM + 3 * i + 2] * f[2];
      }
    }
  }
  return dy;
}

void axpy(Y& out, const Y& y, double h, const Y& k) {
  for (int n = 0; n < kDim; ++n) out[n] = y[n] + h * k[n];
}

}  // namespace

CharacteristicField backtrace(const VelocityHistory& u, double t_from, double t_to, const TraceOptions& opts) {
  if (!(t_to <= t_from)) throw std::invalid_argument("backtrace: need t_to <= t_from");
  if (opts.substeps < 1) throw std::invalid_argument("backtrace: substeps must be positive");
  const double slack = 1e-9 * std::max(1.0, std::abs(t_from));
  if (t_to < u.start_time() - slack || t_from > u.final_time() + slack) {
    throw std::invalid_argument("backtrace: interval outside the velocity history");
  }
  const Grid& g = u.grid();
  CharacteristicField cf{g, t_from, t_to, std::vector<Vec3>(g.size()), ScalarField(g), {}, {}, {}};
  const bool with_rho_src = opts.sources != nullptr && static_cast<bool>(opts.sources->rho);
  const bool with_H_src = opts.propagator && opts.sources != nullptr && static_cast<bool>(opts.sources->H);
  if (with_rho_src) cf.rho_source.emplace(g);
  if (with_H_src) cf.H_source.emplace(g);
  if (opts.propagator) cf.propagator.assign(g.size(), Mat3{1, 0, 0, 0, 1, 0, 0, 0, 1});

  const double span = t_from - t_to;
  if (span == 0.0) {
    for (std::size_t n = 0; n < g.size(); ++n) cf.departure[n] = g.node(n);
    return cf;
  }
  const int intervals = u.is_steady() ? 1 : std::max(1, static_cast<int>(std::ceil(span / u.dt() - 1e-9)));
  const int steps = intervals * opts.substeps;
  const double h = span / steps;

  std::vector<StageVelocity> stages;
  stages.reserve(2 * steps + 1);
  for (int m = 0; m <= 2 * steps; ++m) {
    const double t = m == 2 * steps ? t_to : t_from - 0.5 * h * m;
    StageVelocity sv{t, u.spline_at(t), std::nullopt};
    if (opts.gradient == GradientSource::InterpolatedSpectral) sv.grad = u.gradient_splines_at(t);
    stages.push_back(std::move(sv));
  }

  for (std::size_t n = 0; n < g.size(); ++n) {
    Y y{};
    const Vec3 x0 = g.node(n);
    for (int a = 0; a < 3; ++a) y[kX + a] = x0[a];
    if (opts.propagator) y[kM] = y[kM + 4] = y[kM + 8] = 1.0;
    Y tmp;
    for (int s = 0; s < steps; ++s) {
      const Y k1 = reversed_rhs(stages[2 * s], y, opts);
      axpy(tmp, y, 0.5 * h, k1);
      const Y k2 = reversed_rhs(stages[2 * s + 1], tmp, opts);
      axpy(tmp, y, 0.5 * h, k2);
      const Y k3 = reversed_rhs(stages[2 * s + 1], tmp, opts);
      axpy(tmp, y, h, k3);
      const Y k4 = reversed_rhs(stages[2 * s + 2], tmp, opts);
      for (int c = 0; c < kDim; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    cf.departure[n] = g.wrap_point({y[kX], y[kX + 1], y[kX + 2]});
    cf.div_integral[n] = y[kPhi];
    if (with_rho_src) (*cf.rho_source)[n] = y[kQ];
    if (opts.propagator) std::copy(y.begin() + kM, y.begin() + kM + 9, cf.propagator[n].begin());
    if (with_H_src) cf.H_source->set(n, {y[kR], y[kR + 1], y[kR + 2]});
  }
  if (!cf.div_integral.is_finite()) throw std::runtime_error("backtrace: non-finite characteristic");
  return cf;
}

ScalarField advect_density(const ScalarField& rho0, const CharacteristicField& chars) {
  require_same_grid(rho0.grid(), chars.grid, "advect_density");
  if (!(rho0.min() > 0.0)) throw std::invalid_argument("advect_density: initial density must be positive");
  const Spline s(rho0);
  const Grid& g = rho0.grid();
  ScalarField out(g);
  for (std::size_t n = 0; n < out.size(); ++n) {
    // a characteristic that never moved reads the node itself (keeps rest states bitwise)
    const double base = chars.departure[n] == g.node(n) ? rho0[n] : s.value(chars.departure[n]);
    out[n] = base * std::exp(-chars.div_integral[n]);
  }
  if (chars.rho_source) out += *chars.rho_source;
  return out;
}

std::pair<double, double> density_envelope(const ScalarField& rho0, const VelocityHistory& u, double t) {
  const double growth = u.integrate(u.max_divergence(), u.start_time(), t);
  return {rho0.min() * std::exp(-growth), rho0.max() * std::exp(growth)};
}

VectorField density_gradient_step(const VectorField& grad_rho, const ScalarField& rho, const VectorField& u,
                                  double dt, int substeps) {
  require_same_grid(grad_rho.grid(), rho.grid(), "density_gradient_step");
  require_same_grid(u.grid(), rho.grid(), "density_gradient_step");
  const Grid& g = rho.grid();
  const VelocityHistory hist = VelocityHistory::steady(u);
  const CharacteristicField chars = backtrace(hist, dt, 0.0, {substeps, false});

  const VectorSpline us(u);
  const VectorSpline graddiv(spectral::gradient(spectral::divergence(u)));
  const Spline rs(rho);
  const VectorSpline gs(grad_rho);
  const double h = dt / substeps;

  // forward state: X, rho, G
  using Z = std::array<double, 7>;
  auto rhs = [&](const Z& z) {
    const Vec3 x{z[0], z[1], z[2]};
    Mat3 jac;
    const Vec3 v = us.value(x, jac);
    const double div = jac[0] + jac[4] + jac[8];
    const Vec3 gd = graddiv.value(x);
    Z dz{};
    for (int a = 0; a < 3; ++a) dz[a] = v[a];
    dz[3] = -div * z[3];
    for (int j = 0; j < 3; ++j) {
      const double jt = jac[j] * z[4] + jac[3 + j] * z[5] + jac[6 + j] * z[6];
      dz[4 + j] = -jt - div * z[4 + j] - z[3] * gd[j];
    }
    return dz;
  };

  VectorField out(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3& x = chars.departure[n];
    const Vec3 g0 = gs.value(x);
    Z z{x[0], x[1], x[2], rs.value(x), g0[0], g0[1], g0[2]};
    for (int s = 0; s < substeps; ++s) {
      const Z k1 = rhs(z);
      Z tmp;
      for (int c = 0; c < 7; ++c) tmp[c] = z[c] + 0.5 * h * k1[c];
      const Z k2 = rhs(tmp);
      for (int c = 0; c < 7; ++c) tmp[c] = z[c] + 0.5 * h * k2[c];
      const Z k3 = rhs(tmp);
      for (int c = 0; c < 7; ++c) tmp[c] = z[c] + h * k3[c];
      const Z k4 = rhs(tmp);
      for (int c = 0; c < 7; ++c) z[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    out.set(n, {z[4], z[5], z[6]});
  }
  return out;
}

DensitySolution evolve_density(const ScalarField& rho0, const VelocityHistory& u, const TraceOptions& opts) {
  if (u.is_steady()) throw std::invalid_argument("evolve_density: needs a time-indexed history");
  DensitySolution sol;
  sol.levels.push_back(rho0);
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    const auto chars = backtrace(u, (k + 1) * u.dt(), k * u.dt(), opts);
    sol.levels.push_back(advect_density(sol.levels.back(), chars));
  }
  for (const auto& r : sol.levels) {
    sol.min.push_back(r.min());
    sol.max.push_back(r.max());
    sol.mass.push_back(r.integral());
  }
  return sol;
}

}  // namespace zmhd
