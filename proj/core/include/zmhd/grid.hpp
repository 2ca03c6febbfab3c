#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace zmhd {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix, entry (i,j) at [3*i + j].
using Mat3 = std::array<double, 9>;

/// Uniform periodic box. Node (i,j,k) sits at (i*h0, j*h1, k*h2); the flat
/// index is row-major with the last axis fastest.
class Grid {
public:
  static constexpr int kMinPointsPerAxis = 4;

  Grid(std::array<int, 3> dims,
       std::array<double, 3> lengths = {2 * std::numbers::pi, 2 * std::numbers::pi,
                                        2 * std::numbers::pi});

  /// Cubic grid with n points per axis on the default (2*pi)^3 box.
  static Grid cube(int n);

  const std::array<int, 3>& dims() const { return dims_; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  int dim(int axis) const { return dims_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / dims_[axis]; }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double volume() const { return lengths_[0] * lengths_[1] * lengths_[2]; }
  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }

  /// Flat index with periodic wrap-around on every axis; total for any ints.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(wrap(i, 0)) * dims_[1] + wrap(j, 1)) * dims_[2] +
           wrap(k, 2);
  }

  int wrap(int i, int axis) const {
    const int n = dims_[axis];
    const int r = i % n;
    return r < 0 ? r + n : r;
  }

  /// Physical coordinate of node `flat`.
  Vec3 node(std::size_t flat) const;

  /// Maps a coordinate into [0, L) on every axis.
  Vec3 wrap_point(const Vec3& x) const;

  bool operator==(const Grid& other) const {
    return dims_ == other.dims_ && lengths_ == other.lengths_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

private:
  std::array<int, 3> dims_;
  std::array<double, 3> lengths_;
};

/// Throws std::invalid_argument unless `a` and `b` are the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace zmhd
