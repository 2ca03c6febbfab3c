#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "zmhd/state.hpp"

namespace zmhd {

/// Named scalar fields on one grid at one time. On disk:
///   "MHDF" | u32 version | 3 x u32 dims | 3 x f64 lengths | f64 time |
///   u32 field count | per field: u32 name length, UTF-8 name, f64 values
/// All integers and floats little-endian, values row-major.
struct Snapshot {
  static constexpr std::uint32_t kVersion = 1;

  Grid grid;
  double time = 0.0;
  std::vector<std::pair<std::string, ScalarField>> fields;

  const ScalarField& field(const std::string& name) const;
};

void write_snapshot(const Snapshot& snap, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

/// State fields are stored as rho, u1, u2, u3, H1, H2, H3.
Snapshot to_snapshot(const State& s);
State from_snapshot(const Snapshot& snap);
void save_snapshot(const State& s, const std::filesystem::path& path);
State load_snapshot(const std::filesystem::path& path);

}  // namespace zmhd
