#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zmhd/state.hpp"
#include "zmhd/transport.hpp"

namespace zmhd {

enum class PicardMode {
  /// Whole-trajectory iteration: each sweep re-solves [0, T] with the
  /// previous velocity trajectory frozen.
  Global,
  /// Iteration to convergence inside every time step before moving on.
  PerStep,
};

struct PicardConfig {
  double T = 0.05;
  double dt = 1e-3;
  /// relative L2(Q_T) distance between successive velocity trajectories
  double tol = 1e-8;
  int max_sweeps = 50;
  /// new ubar = damping * G(ubar) + (1 - damping) * ubar
  double damping = 1.0;
  /// drop to damping 0.5 after two consecutive distance increases
  bool auto_damping = true;
  double sigma = 4.0;
  double q = 6.0;
  PicardMode mode = PicardMode::Global;
  /// RK4 substeps per step along characteristics
  int substeps = 4;
  double cg_tol = 1e-10;
  int cg_max_iters = 500;

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
  /// Number of steps K with K * dt = T.
  int steps() const;
};

/// Source terms of a manufactured problem; empty members mean no forcing.
struct Forcing {
  CharacteristicSources transport;
  std::function<VectorField(double, const Grid&)> momentum;
};

/// The four norms bounding the invariant set and its radius r.
struct BallDiagnostics {
  double radius = 0.0;
  /// |u|_{L2(0,T; W^{2,q} cap H^2)}
  double u_l2_w2 = 0.0;
  /// |sqrt(rho) u_t|_{Linf(0,T; L2)}
  double sqrt_rho_ut = 0.0;
  /// |u|_{Linf(0,T; H^2)}
  double u_linf_h2 = 0.0;
  /// |u_t|_{L2(0,T; H^1)}
  double ut_l2_h1 = 0.0;
  bool inside = true;
  /// name of the largest norm above the radius; empty when inside
  std::string escaped;
};

/// Relative discrete residuals of the three equations with ubar = u.
struct Residuals {
  double continuity = 0.0;
  double momentum = 0.0;
  double induction = 0.0;

  double max() const;
};

struct PicardReport {
  std::vector<double> distances;
  std::vector<BallDiagnostics> ball;
  /// damping used in each sweep
  std::vector<double> damping;
  bool converged = false;
  int sweeps = 0;
  Residuals residual;
};

/// One application of the fixed-point map: transport, induction and momentum
/// stages marched over [0, T] with the velocity levels `ubar` frozen.
/// Throws SolverError if the momentum solve stalls or the density loses
/// positivity.
Trajectory sweep(const std::vector<VectorField>& ubar, const State& initial, const PhysicsConfig& cfg,
                 const PicardConfig& pcfg, const Forcing* forcing = nullptr);

/// Damped Picard iteration from `guess` (default: u0 at every level). On
/// exhaustion the iterate with the smallest distance is returned.
std::pair<Trajectory, PicardReport> solve(const State& initial, const PhysicsConfig& cfg,
                                          const PicardConfig& pcfg, const Forcing* forcing = nullptr,
                                          const std::vector<VectorField>* guess = nullptr);

/// r^2 = sigma (|lap u0|^2 + |u0|_inf^2 |grad u0|^2 + |rho0|^2 + |H0|^2) / min rho0,
/// with |f| = |f|_{W^{1,q}} + |f|_{H^1} for rho0 and H0.
double ball_radius(const State& initial, double sigma, double q);
BallDiagnostics ball_check(const Trajectory& traj, const State& initial, double sigma, double q);

Residuals residuals(const Trajectory& traj, const PhysicsConfig& cfg, const PicardConfig& pcfg,
                    const Forcing* forcing = nullptr);

struct ContinuityProbe {
  /// |G(a) - G(b)| / |a - b| in L2(Q_T)
  double ratio = 0.0;
  /// the same over [0, T/2]
  double ratio_half = 0.0;
  /// a == b: both ratios are reported as 0
  bool identical = false;
};

ContinuityProbe continuity_probe(const std::vector<VectorField>& ubar_a, const std::vector<VectorField>& ubar_b,
                                 const State& initial, const PhysicsConfig& cfg, const PicardConfig& pcfg);

/// Relative L2(Q_T) distance |a - b| / |a| (absolute when |a| = 0).
double relative_distance(const std::vector<VectorField>& a, const std::vector<VectorField>& b, double dt);

}  // namespace zmhd
