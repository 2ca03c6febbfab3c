#include "zmhd/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "zmhd/induction.hpp"
#include "zmhd/momentum.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/spectral.hpp"

namespace zmhd {

bool InequalityRecord::pass() const {
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    if (!(lhs[k] <= rhs[k] + tol * std::abs(rhs[k]))) return false;
  }
  return true;
}

double InequalityRecord::min_margin() const {
  double m = kInf;
  for (std::size_t k = lhs.size() > 1 ? 1 : 0; k < lhs.size(); ++k) m = std::min(m, margin(k));
  return m;
}

namespace {

// cumulative trapezoid integral over uniformly spaced levels
std::vector<double> cumulative(const std::vector<double>& f, double dt) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
  return out;
}

ScalarField sqrt_field(ScalarField f) {
  for (auto& v : f.values()) v = std::sqrt(v);
  return f;
}

// pointwise Frobenius norm of the gradient of every entry of m
ScalarField gradient_magnitude(const MatrixField& m) {
  ScalarField sum(m.grid());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const VectorField g = spectral::gradient(m(i, j));
      for (int c = 0; c < 3; ++c) sum += hadamard(g[c], g[c]);
    }
  }
  return sqrt_field(std::move(sum));
}

struct LevelNorms {
  double div_inf = 0.0;
  double grad_inf = 0.0;
  double stretch_inf = 0.0;
  double grad_div_q = 0.0;
  double grad_stretch_q = 0.0;
  // |grad u|_{1,q}: the part of |u|_{2,q} the rates depend on
  double grad_u_1q = 0.0;
  double rho_inf = 0.0;
  double rho_min = 0.0;
  double grad_rho_q = 0.0;
  double H_inf = 0.0;
  double grad_H_q = 0.0;
};

LevelNorms level_norms(const State& s, double q) {
  LevelNorms n;
  const MatrixField grad = spectral::vector_gradient(s.u);
  const MatrixField stretch = grad.minus_trace_identity();
  n.div_inf = grad.trace().max_abs();
  n.grad_inf = lp_norm(grad, kInf);
  n.stretch_inf = lp_norm(stretch, kInf);
  n.grad_div_q = lp_norm(spectral::grad_div(s.u), q);
  n.grad_stretch_q = lp_norm(gradient_magnitude(stretch), q);
  const NormSuite un = norms(s.u, q);
  n.grad_u_1q = un.w2_q - un.lq;
  n.rho_inf = s.rho.max_abs();
  n.rho_min = s.rho.min();
  n.grad_rho_q = lp_norm(spectral::gradient(s.rho), q);
  n.H_inf = lp_norm(s.H, kInf);
  n.grad_H_q = lp_norm(spectral::vector_gradient(s.H), q);
  return n;
}

InequalityRecord make_record(std::string name, const Trajectory& traj, double tol) {
  InequalityRecord r;
  r.name = std::move(name);
  r.tol = tol;
  for (const State& s : traj) r.t.push_back(s.t);
  return r;
}

std::optional<double> ratio_max(const std::vector<double>& num, const std::vector<double>& den) {
  std::optional<double> best;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (den[k] > 0.0 && num[k] > 0.0) best = std::max(best.value_or(0.0), num[k] / den[k]);
  }
  return best;
}

template <class Field>
InequalityRecord interpolation_record(const Field& f, double q) {
  const double theta = interpolation_theta(q);
  InequalityRecord r;
  r.name = "interpolation";
  r.t = {0.0};
  r.lhs = {lp_norm(f, 3.0)};
  r.rhs = {std::pow(lp_norm(f, 2.0), theta) * std::pow(lp_norm(f, q), 1.0 - theta)};
  return r;
}

}  // namespace

double interpolation_theta(double q) {
  require_q(q);
  return (1.0 / 3.0 - 1.0 / q) / (0.5 - 1.0 / q);
}

InequalityRecord interpolation_check(const ScalarField& f, double q) { return interpolation_record(f, q); }
InequalityRecord interpolation_check(const VectorField& f, double q) { return interpolation_record(f, q); }

std::vector<InequalityRecord> audit_run(const Trajectory& traj, const PhysicsConfig& cfg, double q, double tol,
                                        const Forcing* forcing) {
  require_q(q);
  if (traj.empty()) throw std::invalid_argument("audit_run: empty trajectory");
  const double dt = traj.dt();
  const std::size_t K = traj.size();
  std::vector<LevelNorms> ln;
  ln.reserve(K);
  for (const State& s : traj) ln.push_back(level_norms(s, q));
  auto series = [&](auto get) {
    std::vector<double> v;
    for (const auto& n : ln) v.push_back(get(n));
    return v;
  };
  const State& s0 = traj.front();

  std::vector<InequalityRecord> out;

  const std::vector<double> I = cumulative(series([](const LevelNorms& n) { return n.div_inf; }), dt);
  InequalityRecord lower = make_record("density_lower", traj, tol);
  InequalityRecord upper = make_record("density_upper", traj, tol);
  for (std::size_t k = 0; k < K; ++k) {
    lower.lhs.push_back(s0.rho.min() * std::exp(-I[k]));
    lower.rhs.push_back(traj[k].rho.min());
    upper.lhs.push_back(traj[k].rho.max());
    upper.rhs.push_back(s0.rho.max() * std::exp(I[k]));
  }
  out.push_back(std::move(lower));
  out.push_back(std::move(upper));

  // The gradient bounds leave one constant implicit: the embedding
  // |grad u|_inf <= C |grad u|_{1,q} <= C |u|_{2,q}. Unset for a flow without gradients.
  const std::optional<double> embedding = ratio_max(series([](const LevelNorms& n) { return n.grad_inf; }),
                                                    series([](const LevelNorms& n) { return n.grad_u_1q; }));

  {
    const auto c = series([](const LevelNorms& n) { return n.grad_inf + n.div_inf; });
    const std::vector<double> growth = cumulative(c, dt);
    const std::vector<double> forcing_int =
        cumulative(series([](const LevelNorms& n) { return n.rho_inf * n.grad_div_q; }), dt);
    InequalityRecord r = make_record("density_gradient", traj, tol);
    for (std::size_t k = 0; k < K; ++k) {
      r.lhs.push_back(ln[k].grad_rho_q);
      r.rhs.push_back(std::exp(growth[k]) * (ln[0].grad_rho_q + forcing_int[k]));
    }
    r.fitted_constant = embedding;
    out.push_back(std::move(r));
  }

  const VelocityHistory hist(traj.velocities(), dt > 0.0 ? dt : 1.0, s0.t);
  for (double p : {2.0, q}) {
    InequalityRecord r = make_record(p == 2.0 ? "magnetic_lp_2" : "magnetic_lp_q", traj, tol);
    const double h0 = lp_norm(s0.H, p);
    for (std::size_t k = 0; k < K; ++k) {
      r.lhs.push_back(lp_norm(traj[k].H, p));
      r.rhs.push_back(h0 * (K == 1 ? 1.0 : magnetic_growth_bound(hist, traj[k].t, p)));
    }
    out.push_back(std::move(r));
  }

  {
    const auto a = series([q](const LevelNorms& n) { return n.grad_inf + n.stretch_inf + n.div_inf / q; });
    const std::vector<double> growth = cumulative(a, dt);
    const std::vector<double> source =
        cumulative(series([](const LevelNorms& n) { return n.H_inf * n.grad_stretch_q; }), dt);
    InequalityRecord r = make_record("magnetic_gradient", traj, tol);
    for (std::size_t k = 0; k < K; ++k) {
      r.lhs.push_back(ln[k].grad_H_q);
      r.rhs.push_back(std::exp(growth[k]) * (ln[0].grad_H_q + source[k]));
    }
    r.fitted_constant = embedding;
    out.push_back(std::move(r));
  }

  {
    // Backward Euler tested with u^{k} - u^{k-1}:
    //   sum dt |sqrt(rho) D u|^2 + mu/2 |grad u^k|^2 + (lambda+mu)/2 |div u^k|^2
    //     <= mu/2 |grad u^0|^2 + (lambda+mu)/2 |div u^0|^2 + sum dt (F, D u)
    // with the dropped remainder mu/2 |grad(u^k - u^{k-1})|^2 + ... >= 0.
    auto elastic = [&](const VectorField& u) {
      const double g = lp_norm(spectral::vector_gradient(u), 2.0);
      const double d = lp_norm(spectral::divergence(u), 2.0);
      return 0.5 * cfg.mu * g * g + 0.5 * (cfg.lambda + cfg.mu) * d * d;
    };
    InequalityRecord ident = make_record("energy_identity", traj, tol);
    InequalityRecord young = make_record("energy_young", traj, tol);
    const double e0 = elastic(s0.u);
    double kinetic = 0.0, work = 0.0, work_young = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (k > 0) {
        const State& s = traj[k];
        const VectorField du = (s.u - traj[k - 1].u) * (1.0 / dt);
        const VectorField root_du = scale_pointwise(sqrt_field(s.rho), du);
        const double acc = inner(root_du, root_du);
        kinetic += dt * acc;
        const VectorField conv = scale_pointwise(s.rho, spectral::vector_gradient(s.u).apply(s.u)) * -1.0;
        VectorField rest = lorentz_force(s.H) - spectral::gradient(cfg.pressure(s.rho));
        if (forcing != nullptr && forcing->momentum) rest += forcing->momentum(s.t, s.u.grid());
        work += dt * (inner(conv, du) + inner(rest, du));
        const VectorField root_conv = scale_pointwise(sqrt_field(s.rho), spectral::vector_gradient(s.u).apply(s.u));
        work_young += dt * (acc / 3.0 + 0.75 * inner(root_conv, root_conv) + inner(rest, du));
      }
      const double e = elastic(traj[k].u);
      ident.lhs.push_back(kinetic + e);
      ident.rhs.push_back(e0 + work);
      young.lhs.push_back(kinetic + e);
      young.rhs.push_back(e0 + work_young);
    }
    out.push_back(std::move(ident));
    out.push_back(std::move(young));
  }

  {
    InequalityRecord r = make_record("interpolation_u", traj, tol);
    for (const State& s : traj) {
      const InequalityRecord one = interpolation_check(s.u, q);
      r.lhs.push_back(one.lhs[0]);
      r.rhs.push_back(one.rhs[0]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

bool StabilityReport::pass() const {
  for (std::size_t k = 0; k < D.size(); ++k) {
    if (!(D[k] <= envelope[k] * (1.0 + 1e-3))) return false;
  }
  return true;
}

StabilityReport stability_report(const Trajectory& a, const Trajectory& b, const PhysicsConfig& cfg) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("stability_report: level counts differ");
  const double dt = a.dt();
  StabilityReport r;
  const std::size_t K = a.size();
  r.identical = true;
  std::vector<double> explicit_part, weighted_part;
  for (std::size_t k = 0; k < K; ++k) {
    const State& s1 = a[k];
    const State& s2 = b[k];
    const ScalarField rho = s1.rho - s2.rho;
    const VectorField u = s1.u - s2.u;
    const VectorField H = s1.H - s2.H;
    r.identical = r.identical && s1.rho.data() == s2.rho.data() && u.max_magnitude() == 0.0 && H.max_magnitude() == 0.0;
    const VectorField ru = scale_pointwise(sqrt_field(s1.rho), u);
    r.t.push_back(s1.t);
    r.D_u.push_back(inner(ru, ru));
    r.D_rho.push_back(inner(rho, rho));
    r.D_H.push_back(inner(H, H));
    r.D.push_back(r.D_u.back() + r.D_rho.back() + r.D_H.back());

    const MatrixField g1 = spectral::vector_gradient(s1.u);
    const double div1 = g1.trace().max_abs();
    const double grad1 = lp_norm(g1, kInf);
    const double stretch1 = lp_norm(g1.minus_trace_identity(), kInf);
    const double rho1 = s1.rho.max_abs(), rho2 = s2.rho.max_abs();
    const double u1 = lp_norm(s1.u, kInf), u2 = lp_norm(s2.u, kInf);
    const double H1 = lp_norm(s1.H, kInf), H2 = lp_norm(s2.H, kInf);
    // u2_t by the backward difference (forward at the first level)
    const std::size_t lo = k == 0 ? 0 : k - 1, hi = k == 0 ? std::min<std::size_t>(1, K - 1) : k;
    const double u2t = hi == lo ? 0.0 : lp_norm((b[hi].u - b[lo].u) * (1.0 / dt), 3.0);
    const double pmax = cfg.max_pressure_derivative(std::min(s1.rho.min(), s2.rho.min()), std::max(rho1, rho2));
    const double grad_rho2 = lp_norm(spectral::gradient(s2.rho), 3.0);
    const double grad_H2 = lp_norm(spectral::vector_gradient(s2.H), 3.0);
    const double grad_H1 = lp_norm(spectral::vector_gradient(s1.H), 2.0);
    const double weight = std::max(1.0, 1.0 / s1.rho.min());

    // terms whose constants are explicit in the energy argument
    const double e = div1 + (div1 + 2.0 * stretch1) + std::sqrt(rho1) * grad1 + u2 * grad1;
    // terms that carry C_epsilon
    const double n = grad_rho2 * grad_rho2 + rho2 * rho2 + H2 * H2 + grad_H2 * grad_H2 + rho1 * rho1 * u1 * u1 +
                     u2t * u2t + rho2 * rho2 * u2 * u2 + pmax * pmax + grad_H1 * grad_H1 + H1 * H1 + H2 * H2;
    explicit_part.push_back(2.0 * weight * e);
    weighted_part.push_back(2.0 * weight * n);
    r.eta.push_back(2.0 * weight * (e + r.c_epsilon * n));
  }
  const std::vector<double> A = cumulative(explicit_part, dt);
  const std::vector<double> B = cumulative(weighted_part, dt);
  const std::vector<double> integral = cumulative(r.eta, dt);
  for (std::size_t k = 0; k < K; ++k) {
    r.envelope.push_back(r.D[0] * std::exp(integral[k]));
    if (r.D[k] == 0.0) continue;
    if (r.D[0] == 0.0) {
      r.fitted_constant = kInf;
      continue;
    }
    const double needed = std::log(r.D[k] / r.D[0]) - A[k];
    if (needed > 0.0) r.fitted_constant = std::max(r.fitted_constant, B[k] > 0.0 ? needed / B[k] : kInf);
  }
  return r;
}

StabilityReport stability_experiment(const State& a, const State& b, const PhysicsConfig& cfg,
                                     const PicardConfig& pcfg) {
  const auto ra = solve(a, cfg, pcfg);
  const auto rb = solve(b, cfg, pcfg);
  if (!ra.second.converged || !rb.second.converged) {
    throw SolverError("stability_experiment: Picard iteration did not converge", ra.second.distances.back());
  }
  return stability_report(ra.first, rb.first, cfg);
}

namespace {

std::ostringstream csv_stream() {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  return os;
}

}  // namespace

std::string to_csv(const std::vector<InequalityRecord>& records) {
  std::ostringstream os = csv_stream();
  os << "name,t,lhs,rhs,margin,fitted_constant,pass\n";
  for (const auto& r : records) {
    for (std::size_t k = 0; k < r.lhs.size(); ++k) {
      const bool ok = r.lhs[k] <= r.rhs[k] + r.tol * std::abs(r.rhs[k]);
      os << r.name << ',' << r.t[k] << ',' << r.lhs[k] << ',' << r.rhs[k] << ',' << r.margin(k) << ',';
      if (r.fitted_constant) os << *r.fitted_constant;
      os << ',' << (ok ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

std::string to_csv(const StabilityReport& r) {
  std::ostringstream os = csv_stream();
  os << "t,D,D_u,D_rho,D_H,eta,envelope,pass\n";
  for (std::size_t k = 0; k < r.D.size(); ++k) {
    os << r.t[k] << ',' << r.D[k] << ',' << r.D_u[k] << ',' << r.D_rho[k] << ',' << r.D_H[k] << ',' << r.eta[k]
       << ',' << r.envelope[k] << ',' << (r.D[k] <= r.envelope[k] * (1.0 + 1e-3) ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace zmhd
