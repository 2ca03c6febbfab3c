#include "zmhd/picard.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "zmhd/induction.hpp"
#include "zmhd/momentum.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/spectral.hpp"

namespace zmhd {

void PicardConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("PicardConfig: T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("PicardConfig: dt must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("PicardConfig: tol must be positive");
  if (max_sweeps < 1) throw std::invalid_argument("PicardConfig: max_sweeps must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("PicardConfig: damping must lie in (0, 1]");
  if (!(sigma >= 1.0)) throw std::invalid_argument("PicardConfig: sigma must be at least 1");
  require_q(q);
  if (substeps < 1) throw std::invalid_argument("PicardConfig: substeps must be positive");
  if (!(cg_tol > 0.0) || cg_max_iters < 1) throw std::invalid_argument("PicardConfig: invalid solver settings");
  const double k = T / dt;
  if (std::abs(k - std::round(k)) > 1e-9 * k) {
    throw std::invalid_argument("PicardConfig: T must be an integer multiple of dt");
  }
}

int PicardConfig::steps() const { return static_cast<int>(std::lround(T / dt)); }

double Residuals::max() const { return std::max({continuity, momentum, induction}); }

namespace {

void check_initial(const State& s) {
  if (!s.is_finite()) throw std::invalid_argument("picard: non-finite initial data");
  if (!(s.rho.min() > 0.0)) throw std::invalid_argument("picard: initial density must be positive");
  const double div = lp_norm(spectral::divergence(s.H), 2.0);
  if (div > 1e-6 * std::max(1.0, lp_norm(s.H, 2.0))) {
    throw std::invalid_argument("picard: initial magnetic field is not divergence-free (|div H0|_2 = " +
                                std::to_string(div) + ")");
  }
}

TraceOptions trace_options(const PicardConfig& pcfg, const Forcing* forcing) {
  TraceOptions opts;
  opts.substeps = pcfg.substeps;
  opts.propagator = true;
  if (forcing != nullptr && (forcing->transport.rho || forcing->transport.H)) opts.sources = &forcing->transport;
  return opts;
}

struct StepResult {
  ScalarField rho;
  VectorField H;
};

StepResult transport_step(const State& prev, const VelocityHistory& hist, double t1, const TraceOptions& opts) {
  const CharacteristicField chars = backtrace(hist, t1, prev.t, opts);
  StepResult out{advect_density(prev.rho, chars), advect_magnetic(prev.H, chars)};
  if (!out.rho.is_finite() || !(out.rho.min() > 0.0)) {
    throw SolverError("density envelope violated at t = " + std::to_string(t1) + " (min rho " +
                          std::to_string(out.rho.min()) + "); reduce dt or T",
                      0.0);
  }
  return out;
}

VectorField momentum_step(const StepResult& tr, const VectorField& ubar, const VectorField& u_prev, double t1,
                          const PhysicsConfig& cfg, const PicardConfig& pcfg, const Forcing* forcing) {
  std::optional<VectorField> src;
  if (forcing != nullptr && forcing->momentum) src = forcing->momentum(t1, ubar.grid());
  const VectorField rhs = build_rhs(tr.rho, ubar, tr.H, u_prev, cfg, pcfg.dt, src ? &*src : nullptr);
  const MomentumOperator op(tr.rho, pcfg.dt, cfg.mu, cfg.lambda);
  // start from the previous level, not ubar: a guess that already meets the
  // tolerance would be returned untouched and hide the fixed-point distance
  return solve_momentum_step(op, rhs, pcfg.cg_tol, pcfg.cg_max_iters, &u_prev).u;
}

double time_of(const PicardConfig& pcfg, int k) { return pcfg.dt * k; }

std::vector<VectorField> blend(const std::vector<VectorField>& next, const std::vector<VectorField>& prev,
                               double theta) {
  if (theta == 1.0) return next;
  std::vector<VectorField> out;
  out.reserve(next.size());
  for (std::size_t k = 0; k < next.size(); ++k) {
    VectorField v = next[k] * theta;
    v.axpy(1.0 - theta, prev[k]);
    out.push_back(std::move(v));
  }
  return out;
}

double l2_sq(const VectorField& v) { return inner(v, v); }
double l2_sq(const ScalarField& v) { return inner(v, v); }

std::pair<Trajectory, PicardReport> solve_per_step(const State& initial, const PhysicsConfig& cfg,
                                                   const PicardConfig& pcfg, const Forcing* forcing) {
  const TraceOptions opts = trace_options(pcfg, forcing);
  PicardReport report;
  report.converged = true;
  Trajectory traj(pcfg.dt);
  traj.push_back(initial);
  traj[0].t = 0.0;
  for (int n = 0; n < pcfg.steps(); ++n) {
    const State& prev = traj.back();
    const double t1 = time_of(pcfg, n + 1);
    VectorField ubar = prev.u;
    double theta = pcfg.damping;
    std::vector<double> local;
    std::optional<StepResult> tr;
    bool done = false;
    for (int it = 0; it < pcfg.max_sweeps && !done; ++it) {
      const VelocityHistory hist({prev.u, ubar}, pcfg.dt, prev.t);
      tr = transport_step(prev, hist, t1, opts);
      VectorField u = momentum_step(*tr, ubar, prev.u, t1, cfg, pcfg, forcing);
      const double nu = std::sqrt(l2_sq(u));
      const double diff = std::sqrt(l2_sq(u - ubar));
      const double d = nu > 0.0 ? diff / nu : diff;
      local.push_back(d);
      ++report.sweeps;
      if (pcfg.auto_damping && theta == 1.0 && local.size() >= 3 && local[local.size() - 1] > local[local.size() - 2] &&
          local[local.size() - 2] > local[local.size() - 3]) {
        theta = 0.5;
      }
      done = d <= pcfg.tol;
      ubar = done ? std::move(u) : blend({u}, {ubar}, theta)[0];
    }
    report.converged = report.converged && done;
    report.distances.push_back(local.back());
    report.damping.push_back(theta);
    traj.push_back(State(tr->rho, ubar, tr->H, t1));
  }
  report.ball.push_back(ball_check(traj, initial, pcfg.sigma, pcfg.q));
  report.residual = residuals(traj, cfg, pcfg, forcing);
  return {std::move(traj), std::move(report)};
}

}  // namespace

double relative_distance(const std::vector<VectorField>& a, const std::vector<VectorField>& b, double dt) {
  const double na = spacetime_l2(a, dt);
  const double d = spacetime_l2_distance(a, b, dt);
  return na > 0.0 ? d / na : d;
}

Trajectory sweep(const std::vector<VectorField>& ubar, const State& initial, const PhysicsConfig& cfg,
                 const PicardConfig& pcfg, const Forcing* forcing) {
  cfg.validate();
  pcfg.validate();
  check_initial(initial);
  const int K = pcfg.steps();
  if (ubar.size() != static_cast<std::size_t>(K) + 1) {
    throw std::invalid_argument("sweep: velocity trajectory has " + std::to_string(ubar.size()) +
                                " levels, expected " + std::to_string(K + 1));
  }
  const VelocityHistory hist(ubar, pcfg.dt);
  const TraceOptions opts = trace_options(pcfg, forcing);
  Trajectory traj(pcfg.dt);
  traj.push_back(initial);
  traj[0].t = 0.0;
  for (int n = 0; n < K; ++n) {
    const State& prev = traj.back();
    const double t1 = time_of(pcfg, n + 1);
    StepResult tr = transport_step(prev, hist, t1, opts);
    VectorField u = momentum_step(tr, ubar[n + 1], prev.u, t1, cfg, pcfg, forcing);
    traj.push_back(State(std::move(tr.rho), std::move(u), std::move(tr.H), t1));
  }
  return traj;
}

std::pair<Trajectory, PicardReport> solve(const State& initial, const PhysicsConfig& cfg, const PicardConfig& pcfg,
                                          const Forcing* forcing, const std::vector<VectorField>* guess) {
  cfg.validate();
  pcfg.validate();
  check_initial(initial);
  if (pcfg.mode == PicardMode::PerStep) return solve_per_step(initial, cfg, pcfg, forcing);

  const std::size_t levels = static_cast<std::size_t>(pcfg.steps()) + 1;
  std::vector<VectorField> ubar = guess != nullptr ? *guess : std::vector<VectorField>(levels, initial.u);
  PicardReport report;
  double theta = pcfg.damping;
  std::optional<Trajectory> best;
  double best_distance = kInf;
  for (int m = 0; m < pcfg.max_sweeps; ++m) {
    Trajectory next = sweep(ubar, initial, cfg, pcfg, forcing);
    std::vector<VectorField> u = next.velocities();
    const double d = relative_distance(u, ubar, pcfg.dt);
    report.distances.push_back(d);
    report.damping.push_back(theta);
    report.ball.push_back(ball_check(next, initial, pcfg.sigma, pcfg.q));
    report.sweeps = m + 1;
    if (d <= best_distance) {
      best_distance = d;
      best = next;
    }
    if (d <= pcfg.tol) {
      report.converged = true;
      break;
    }
    const auto& ds = report.distances;
    if (pcfg.auto_damping && theta == 1.0 && ds.size() >= 3 && ds[ds.size() - 1] > ds[ds.size() - 2] &&
        ds[ds.size() - 2] > ds[ds.size() - 3]) {
      theta = 0.5;
    }
    ubar = blend(u, ubar, theta);
  }
  report.residual = residuals(*best, cfg, pcfg, forcing);
  return {std::move(*best), std::move(report)};
}

double ball_radius(const State& initial, double sigma, double q) {
  const VectorField& u0 = initial.u;
  const double lap = lp_norm(spectral::laplacian(u0), 2.0);
  const double grad = lp_norm(spectral::vector_gradient(u0), 2.0);
  const double uinf = lp_norm(u0, kInf);
  const NormSuite r = norms(initial.rho, q);
  const NormSuite h = norms(initial.H, q);
  const double rho_n = r.w1_q + r.w1_2;
  const double h_n = h.w1_q + h.w1_2;
  const double alpha = initial.rho.min();
  return std::sqrt(sigma * (lap * lap + uinf * uinf * grad * grad + rho_n * rho_n + h_n * h_n) / alpha);
}

BallDiagnostics ball_check(const Trajectory& traj, const State& initial, double sigma, double q) {
  BallDiagnostics b;
  b.radius = ball_radius(initial, sigma, q);
  const double dt = traj.dt();
  double l2_w2 = 0.0;
  double l2_h1 = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const NormSuite n = norms(traj[k].u, q);
    b.u_linf_h2 = std::max(b.u_linf_h2, n.w2_2);
    if (k == 0) continue;
    l2_w2 += dt * (n.w2_q + n.w2_2) * (n.w2_q + n.w2_2);
    VectorField ut = (traj[k].u - traj[k - 1].u) * (1.0 / dt);
    const double h1 = norms(ut, q).w1_2;
    l2_h1 += dt * h1 * h1;
    ScalarField root = traj[k].rho;
    for (auto& v : root.values()) v = std::sqrt(v);
    b.sqrt_rho_ut = std::max(b.sqrt_rho_ut, lp_norm(scale_pointwise(root, std::move(ut)), 2.0));
  }
  b.u_l2_w2 = std::sqrt(l2_w2);
  b.ut_l2_h1 = std::sqrt(l2_h1);
  const std::pair<const char*, double> entries[] = {{"u_l2_w2", b.u_l2_w2},
                                                    {"sqrt_rho_ut", b.sqrt_rho_ut},
                                                    {"u_linf_h2", b.u_linf_h2},
                                                    {"ut_l2_h1", b.ut_l2_h1}};
  double worst = b.radius;
  for (const auto& [name, value] : entries) {
    if (value > worst) {
      worst = value;
      b.escaped = name;
    }
  }
  b.inside = b.escaped.empty();
  return b;
}

Residuals residuals(const Trajectory& traj, const PhysicsConfig& cfg, const PicardConfig& pcfg,
                    const Forcing* forcing) {
  Residuals r;
  if (traj.size() < 2) return r;
  const double dt = traj.dt();
  const VelocityHistory hist(traj.velocities(), dt);
  const TraceOptions opts = trace_options(pcfg, forcing);
  double rho_num = 0.0, rho_den = 0.0, h_num = 0.0, h_den = 0.0, m_num = 0.0, m_den = 0.0;
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const State& a = traj[n];
    const State& b = traj[n + 1];
    const CharacteristicField chars = backtrace(hist, b.t, a.t, opts);
    rho_num += l2_sq(b.rho - advect_density(a.rho, chars));
    rho_den += l2_sq(b.rho);
    h_num += l2_sq(b.H - advect_magnetic(a.H, chars));
    h_den += l2_sq(b.H);
    const VectorField accel = scale_pointwise(b.rho, (b.u - a.u) * (1.0 / dt));
    VectorField force = momentum_force(b.rho, b.u, b.H, cfg);
    if (forcing != nullptr && forcing->momentum) force += forcing->momentum(b.t, b.u.grid());
    m_num += l2_sq(accel - force);
    const double den = std::sqrt(l2_sq(accel)) + std::sqrt(l2_sq(force));
    m_den += den * den;
  }
  auto ratio = [](double num, double den) { return num == 0.0 ? 0.0 : std::sqrt(num / den); };
  r.continuity = ratio(rho_num, rho_den);
  r.induction = ratio(h_num, h_den);
  r.momentum = ratio(m_num, m_den);
  return r;
}

ContinuityProbe continuity_probe(const std::vector<VectorField>& ubar_a, const std::vector<VectorField>& ubar_b,
                                 const State& initial, const PhysicsConfig& cfg, const PicardConfig& pcfg) {
  ContinuityProbe p;
  const double dt = pcfg.dt;
  const double input = spacetime_l2_distance(ubar_a, ubar_b, dt);
  if (input == 0.0) {
    p.identical = true;
    return p;
  }
  const std::vector<VectorField> ga = sweep(ubar_a, initial, cfg, pcfg).velocities();
  const std::vector<VectorField> gb = sweep(ubar_b, initial, cfg, pcfg).velocities();
  p.ratio = spacetime_l2_distance(ga, gb, dt) / input;
  const std::size_t half = ga.size() / 2 + 1;
  auto prefix = [half](const std::vector<VectorField>& v) {
    return std::vector<VectorField>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(half));
  };
  const double input_half = spacetime_l2_distance(prefix(ubar_a), prefix(ubar_b), dt);
  p.ratio_half = input_half > 0.0 ? spacetime_l2_distance(prefix(ga), prefix(gb), dt) / input_half : 0.0;
  return p;
}

}  // namespace zmhd
