#include "zmhd/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zmhd {

Grid::Grid(std::array<int, 3> dims, std::array<double, 3> lengths)
    : dims_(dims), lengths_(lengths) {
  for (int a = 0; a < 3; ++a) {
    if (dims_[a] < kMinPointsPerAxis) {
      throw std::invalid_argument("Grid: axis " + std::to_string(a) + " has " +
                                  std::to_string(dims_[a]) + " points, need at least " +
                                  std::to_string(kMinPointsPerAxis));
    }
    if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a])) {
      throw std::invalid_argument("Grid: axis " + std::to_string(a) +
                                  " length must be positive and finite");
    }
  }
}

Grid Grid::cube(int n) { return Grid({n, n, n}); }

Vec3 Grid::node(std::size_t flat) const {
  const std::size_t k = flat % dims_[2];
  const std::size_t j = (flat / dims_[2]) % dims_[1];
  const std::size_t i = flat / (static_cast<std::size_t>(dims_[1]) * dims_[2]);
  return {static_cast<double>(i) * spacing(0), static_cast<double>(j) * spacing(1),
          static_cast<double>(k) * spacing(2)};
}

Vec3 Grid::wrap_point(const Vec3& x) const {
  Vec3 r{};
  for (int a = 0; a < 3; ++a) {
    double v = std::fmod(x[a], lengths_[a]);
    if (v < 0.0) v += lengths_[a];
    // fmod of a tiny negative number can round back up to L
    if (v >= lengths_[a]) v = 0.0;
    r[a] = v;
  }
  return r;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

}  // namespace zmhd
