#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zmhd/state.hpp"

namespace zmhd::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSolverError = 3,
  kAuditFailure = 4,
};

/// Entry point of the `zmhd` driver; args excludes the program name.
int run(const std::vector<std::string>& args);

/// Snapshots written by `run`, one file per stored level.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir, int every);
/// Reads every *.mhdf in dir in name order; levels must be evenly spaced.
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace zmhd::cli
