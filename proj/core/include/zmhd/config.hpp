#pragma once

#include <array>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>

#include "zmhd/picard.hpp"

namespace zmhd {

/// Bad configuration: parse errors, unknown keys, violated constraints.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Everything a run needs. Flat `key = value` text on disk, `#` starts a
/// comment. Keys:
///   A gamma mu lambda                         physics
///   resolution (one or three ints)            grid points per axis
///   box_length (one or three values)          periodic box edges
///   T dt tol max_sweeps damping auto_damping sigma q mode substeps cg_tol cg_max_iters
///   preset | initial (snapshot path)          initial data
///   output_dir diagnostics_every audit_tol
struct RunConfig {
  PhysicsConfig physics;
  PicardConfig picard;
  std::array<int, 3> resolution{16, 16, 16};
  std::array<double, 3> box_length{2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi};
  std::string preset = "small-data";
  /// when set, the initial state is read from this snapshot instead of the preset
  std::filesystem::path initial;
  std::filesystem::path output_dir = "out";
  /// write a snapshot every this many time levels (the last level always)
  int diagnostics_every = 1;
  double audit_tol = 1e-3;

  Grid grid() const { return Grid(resolution, box_length); }
  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

/// `origin` prefixes error messages (usually the file name).
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);
/// Every key, full precision; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

/// Preset or snapshot, as configured.
State initial_state(const RunConfig& cfg);

}  // namespace zmhd
