#pragma once

#include <string>
#include <vector>

#include "zmhd/state.hpp"

namespace zmhd {

/// Named initial conditions: rest, small-data, traveling-wave, rotation,
/// single-mode-mms.
std::vector<std::string> preset_names();

/// Throws std::invalid_argument for an unknown name.
State make_preset(const std::string& name, const Grid& grid);

}  // namespace zmhd
