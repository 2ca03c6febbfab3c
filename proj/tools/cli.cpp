#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "zmhd/config.hpp"
#include "zmhd/estimates.hpp"
#include "zmhd/mms.hpp"
#include "zmhd/momentum.hpp"
#include "zmhd/norms.hpp"
#include "zmhd/snapshot.hpp"
#include "zmhd/spectral.hpp"

namespace zmhd::cli {

namespace {

constexpr double kSpatialOrderFloor = 3.5;
constexpr double kTemporalOrderFloor = 0.9;

std::string full(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

std::string diagnostics_csv(const Trajectory& traj, const PhysicsConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "t,rho_min,rho_max,u_l2,H_l2,div_H_l2,kinetic_energy,magnetic_energy,pressure_l1\n";
  for (const State& s : traj) {
    const VectorField mom = scale_pointwise(s.rho, s.u);
    const double kinetic = 0.5 * inner(mom, s.u);
    const double magnetic = 0.5 * inner(s.H, s.H);
    os << s.t << ',' << s.rho.min() << ',' << s.rho.max() << ',' << lp_norm(s.u, 2.0) << ',' << lp_norm(s.H, 2.0)
       << ',' << lp_norm(spectral::divergence(s.H), 2.0) << ',' << kinetic << ',' << magnetic << ','
       << lp_norm(cfg.pressure(s.rho), 1.0) << '\n';
  }
  return os.str();
}

std::string picard_csv(const PicardReport& r) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "index,distance,damping\n";
  for (std::size_t m = 0; m < r.distances.size(); ++m) {
    os << m + 1 << ',' << r.distances[m] << ',';
    if (m < r.damping.size()) os << r.damping[m];
    os << '\n';
  }
  return os.str();
}

bool audit_summary(const std::vector<InequalityRecord>& records, std::ostream& os) {
  bool ok = true;
  for (const auto& r : records) {
    os << "  " << std::left << std::setw(20) << r.name << (r.pass() ? "pass" : "FAIL") << "  min margin "
       << r.min_margin();
    if (r.fitted_constant) os << "  fitted constant " << *r.fitted_constant;
    os << '\n';
    ok = ok && r.pass();
  }
  return ok;
}

VectorField mode_field(const Grid& g, double delta) {
  return VectorField::from_function(g, [&](const Vec3& x) { return Vec3{delta * std::sin(x[1]), 0.0, 0.0}; });
}

struct Perturbation {
  double u = 0.0;
  double H = 0.0;
  double rho = 0.0;

  bool any() const { return u != 0.0 || H != 0.0 || rho != 0.0; }
  Perturbation scaled(double f) const { return {u * f, H * f, rho * f}; }

  State apply(State s) const {
    const Grid& g = s.grid();
    if (u != 0.0) s.u += mode_field(g, u);
    if (H != 0.0) s.H += mode_field(g, H);
    if (rho != 0.0) s.rho += ScalarField::from_function(g, [&](const Vec3& x) { return rho * std::sin(x[0]); });
    return s;
  }
};

Perturbation parse_perturbations(const std::vector<std::string>& specs) {
  Perturbation p;
  for (const std::string& spec : specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("perturbation must look like field:delta, got '" + spec + "'");
    const std::string field = spec.substr(0, colon);
    double delta = 0.0;
    try {
      std::size_t used = 0;
      delta = std::stod(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw ConfigError("bad perturbation size in '" + spec + "'");
    }
    if (field == "u") {
      p.u = delta;
    } else if (field == "H") {
      p.H = delta;
    } else if (field == "rho") {
      p.rho = delta;
    } else {
      throw ConfigError("perturbed field must be u, H or rho, got '" + field + "'");
    }
  }
  return p;
}

RunConfig config_or_default(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

std::filesystem::path output_of(const RunConfig& cfg, const std::string& override_dir) {
  const std::filesystem::path dir = override_dir.empty() ? cfg.output_dir : std::filesystem::path(override_dir);
  prepare_dir(dir);
  return dir;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const RunConfig cfg = load_config(config_path);
  const std::filesystem::path dir = output_of(cfg, out_dir);
  const State s0 = initial_state(cfg);
  const auto [traj, report] = solve(s0, cfg.physics, cfg.picard);
  if (!report.converged) {
    std::cerr << "Picard iteration did not converge in " << report.sweeps << " sweeps (last distance "
              << report.distances.back() << ")\n";
    write_text(dir / "picard.csv", picard_csv(report));
    return kSolverError;
  }
  write_trajectory(traj, dir / "snapshots", cfg.diagnostics_every);
  const auto records = audit_run(traj, cfg.physics, cfg.picard.q, cfg.audit_tol);
  write_text(dir / "audit.csv", to_csv(records));
  write_text(dir / "diagnostics.csv", diagnostics_csv(traj, cfg.physics));
  write_text(dir / "picard.csv", picard_csv(report));
  save_config(cfg, dir / "config.txt");

  std::ostringstream os;
  const BallDiagnostics& ball = report.ball.back();
  os << "initial data   " << (cfg.initial.empty() ? cfg.preset : cfg.initial.string()) << '\n'
     << "grid           " << cfg.resolution[0] << 'x' << cfg.resolution[1] << 'x' << cfg.resolution[2] << '\n'
     << "T, dt          " << cfg.picard.T << ", " << cfg.picard.dt << '\n'
     << "sweeps         " << report.sweeps << " (final distance " << report.distances.back() << ")\n"
     << "residuals      continuity " << report.residual.continuity << ", momentum " << report.residual.momentum
     << ", induction " << report.residual.induction << '\n'
     << "ball           radius " << ball.radius << ", norms " << ball.u_l2_w2 << ' ' << ball.sqrt_rho_ut << ' '
     << ball.u_linf_h2 << ' ' << ball.ut_l2_h1 << (ball.inside ? " inside" : " escaped via " + ball.escaped) << '\n'
     << "audit\n";
  const bool audits_ok = audit_summary(records, os) && ball.inside;
  os << "result         " << (audits_ok ? "all audits pass" : "audit failure") << '\n';
  write_text(dir / "summary.txt", os.str());
  std::cout << os.str();
  return audits_ok ? kOk : kAuditFailure;
}

int cmd_verify(const std::string& traj_dir, const std::string& config_path, const std::string& out_dir) {
  const RunConfig cfg = config_or_default(config_path);
  const Trajectory traj = read_trajectory(traj_dir);
  const auto records = audit_run(traj, cfg.physics, cfg.picard.q, cfg.audit_tol);
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(traj_dir) : std::filesystem::path(out_dir);
  prepare_dir(dir);
  write_text(dir / "audit.csv", to_csv(records));
  std::cout << traj.size() << " levels, dt " << traj.dt() << '\n';
  const bool ok = audit_summary(records, std::cout);
  return ok ? kOk : kAuditFailure;
}

int cmd_stability(const std::string& config_path, const std::vector<std::string>& perturb, const std::string& out_dir) {
  const RunConfig cfg = config_or_default(config_path);
  const Perturbation p = parse_perturbations(perturb);
  const std::filesystem::path dir = output_of(cfg, out_dir);
  const State a = initial_state(cfg);
  const StabilityReport full = stability_experiment(a, p.apply(a), cfg.physics, cfg.picard);
  write_text(dir / "stability.csv", to_csv(full));
  std::cout << "D(0) " << full.D.front() << ", D(T) " << full.D.back() << ", envelope(T) " << full.envelope.back()
            << ", fitted C_eps " << full.fitted_constant << '\n';
  bool ok = full.pass();
  if (!p.any()) {
    ok = ok && full.identical;
    std::cout << (full.identical ? "identical runs, D = 0 at every level\n" : "unperturbed runs differ\n");
  } else {
    const StabilityReport half = stability_experiment(a, p.scaled(0.5).apply(a), cfg.physics, cfg.picard);
    write_text(dir / "stability_half.csv", to_csv(half));
    const double ratio = half.D.back() / full.D.back();
    const bool quadratic = ratio >= 0.2 && ratio <= 0.3;
    std::cout << "halving delta scales D(T) by " << ratio << (quadratic ? " (quadratic)\n" : " (not quadratic)\n");
    ok = ok && half.pass() && quadratic;
  }
  std::cout << (ok ? "stability audit passes\n" : "stability audit FAILS\n");
  return ok ? kOk : kAuditFailure;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  for (std::string item; std::getline(is, item, ',');) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad list entry '" + item + "'");
    }
  }
  return out;
}

int cmd_mms(const std::string& preset, const std::string& resolutions, const std::string& dts, double T,
            const std::string& out_dir) {
  if (preset != "single-mode" && preset != "single-mode-mms") throw ConfigError("unknown manufactured case " + preset);
  StudyConfig study;
  if (T > 0.0) study.T = T;
  if (!resolutions.empty()) {
    study.resolutions.clear();
    for (double n : parse_list(resolutions)) study.resolutions.push_back(static_cast<int>(n));
  }
  if (!dts.empty()) study.dts = parse_list(dts);
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path("out") : std::filesystem::path(out_dir);
  prepare_dir(dir);
  const OrderTable table = convergence_study(single_mode_case(), study);
  write_text(dir / "orders.csv", to_csv(table));
  auto show = [](const std::optional<double>& o) { return o ? full(*o) : std::string("n/a"); };
  std::cout << "spatial order  " << show(table.spatial_order) << '\n'
            << "temporal order " << show(table.temporal_order) << '\n'
            << "runtime        " << table.seconds << " s\n";
  const bool ok = table.spatial_order.value_or(0.0) >= kSpatialOrderFloor &&
                  table.temporal_order.value_or(0.0) >= kTemporalOrderFloor;
  return ok ? kOk : kAuditFailure;
}

// Samples the fine state at the nodes of the coarse grid (fine N a multiple of coarse N).
State restrict_to(const State& fine, const Grid& coarse) {
  const Grid& g = fine.grid();
  std::array<int, 3> r{};
  for (int a = 0; a < 3; ++a) {
    if (g.dim(a) % coarse.dim(a) != 0) throw ConfigError("each resolution must divide the finest one");
    r[a] = g.dim(a) / coarse.dim(a);
  }
  State out(coarse);
  auto copy = [&](const ScalarField& src, ScalarField& dst) {
    for (int i = 0; i < coarse.dim(0); ++i)
      for (int j = 0; j < coarse.dim(1); ++j)
        for (int k = 0; k < coarse.dim(2); ++k) dst[coarse.index(i, j, k)] = src[g.index(i * r[0], j * r[1], k * r[2])];
  };
  copy(fine.rho, out.rho);
  for (int c = 0; c < 3; ++c) {
    copy(fine.u[c], out.u[c]);
    copy(fine.H[c], out.H[c]);
  }
  out.t = fine.t;
  return out;
}

int cmd_convergence(const std::string& config_path, const std::string& resolutions, const std::string& out_dir) {
  RunConfig cfg = config_or_default(config_path);
  if (!cfg.initial.empty()) throw ConfigError("convergence needs a preset, not a snapshot");
  std::vector<int> ns;
  for (double n : parse_list(resolutions.empty() ? "8,16,32" : resolutions)) ns.push_back(static_cast<int>(n));
  if (ns.size() < 3) throw ConfigError("convergence needs at least three resolutions");
  std::sort(ns.begin(), ns.end());
  const std::filesystem::path dir = output_of(cfg, out_dir);
  std::vector<State> finals;
  for (int n : ns) {
    cfg.resolution = {n, n, n};
    const auto [traj, report] = solve(initial_state(cfg), cfg.physics, cfg.picard);
    if (!report.converged) {
      std::cerr << "Picard iteration did not converge at N = " << n << '\n';
      return kSolverError;
    }
    finals.push_back(traj.back());
  }
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "N,error_rho,error_u,error_H,error_total\n";
  std::vector<double> h, err;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    const State ref = restrict_to(finals.back(), finals[i].grid());
    const double e_rho = lp_norm(finals[i].rho - ref.rho, 2.0);
    const double e_u = lp_norm(finals[i].u - ref.u, 2.0);
    const double e_H = lp_norm(finals[i].H - ref.H, 2.0);
    const double total = std::sqrt(e_rho * e_rho + e_u * e_u + e_H * e_H);
    os << ns[i] << ',' << e_rho << ',' << e_u << ',' << e_H << ',' << total << '\n';
    h.push_back(1.0 / ns[i]);
    err.push_back(total);
  }
  write_text(dir / "convergence.csv", os.str());
  std::cout << os.str();
  if (std::all_of(err.begin(), err.end(), [](double e) { return e > 1e-12; })) {
    std::cout << "observed order against N = " << ns.back() << ": " << fitted_order(h, err) << '\n';
  } else {
    std::cout << "errors at round-off level, no order to fit\n";
  }
  return kOk;
}

}  // namespace

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir, int every) {
  prepare_dir(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".mhdf") std::filesystem::remove(entry.path());
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != traj.size()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "level_%06zu.mhdf", k);
    try {
      save_snapshot(traj[k], dir / name);
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
  }
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".mhdf") files.push_back(entry.path());
  }
  if (files.empty()) throw ConfigError("no snapshots in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<State> states;
  for (const auto& f : files) {
    try {
      states.push_back(load_snapshot(f));
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
  }
  const double dt = states.size() > 1 ? states[1].t - states[0].t : 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    if (std::abs(states[k].t - states[k - 1].t - dt) > 1e-9 * std::max(1.0, dt)) {
      throw ConfigError("snapshots in " + dir.string() + " are not evenly spaced in time");
    }
  }
  Trajectory traj(dt);
  for (State& s : states) traj.push_back(std::move(s));
  return traj;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Compressible isentropic MHD solver with estimate audits", "zmhd"};
  app.require_subcommand(1);

  std::string config, out, traj_dir, resolutions, dts, preset = "single-mode";
  std::vector<std::string> perturb;
  double T = 0.0;

  auto* run_cmd = app.add_subcommand("run", "solve, audit and write snapshots");
  run_cmd->add_option("-c,--config", config, "config file")->required();
  run_cmd->add_option("-o,--output", out, "output directory (overrides output_dir)");

  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms_cmd->add_option("--preset", preset, "manufactured case");
  mms_cmd->add_option("--resolutions", resolutions, "comma-separated grid sizes");
  mms_cmd->add_option("--dts", dts, "comma-separated time steps");
  mms_cmd->add_option("--T", T, "final time");
  mms_cmd->add_option("-o,--output", out, "output directory");

  auto* verify_cmd = app.add_subcommand("verify-bounds", "audit a stored trajectory");
  verify_cmd->add_option("trajectory", traj_dir, "directory of snapshots")->required();
  verify_cmd->add_option("-c,--config", config, "config file with the physics parameters");
  verify_cmd->add_option("-o,--output", out, "where to write audit.csv");

  auto* stab_cmd = app.add_subcommand("stability", "two-run stability experiment");
  stab_cmd->add_option("-c,--config", config, "config file");
  stab_cmd->add_option("--perturb", perturb, "field:delta with field in u, H, rho");
  stab_cmd->add_option("-o,--output", out, "output directory");

  auto* conv_cmd = app.add_subcommand("convergence", "resolution sweep against the finest grid");
  conv_cmd->add_option("-c,--config", config, "config file");
  conv_cmd->add_option("--resolutions", resolutions, "comma-separated grid sizes, each dividing the last");
  conv_cmd->add_option("-o,--output", out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(config, out);
    if (*mms_cmd) return cmd_mms(preset, resolutions, dts, T, out);
    if (*verify_cmd) return cmd_verify(traj_dir, config, out);
    if (*stab_cmd) return cmd_stability(config, perturb, out);
    if (*conv_cmd) return cmd_convergence(config, resolutions, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return kConfigError;
}

}  // namespace zmhd::cli
