#pragma once

#include <cmath>
#include <random>

#include "zmhd/field.hpp"

namespace zmhd::testing {

// Smooth periodic field: a handful of random Fourier modes with |k| <= kmax.
inline ScalarField random_smooth(const Grid& g, unsigned seed, int kmax = 3, double amp = 1.0,
                                 int modes = 6) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> kd(-kmax, kmax);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  struct Mode {
    int k[3];
    double a, phase;
  };
  std::vector<Mode> ms;
  for (int m = 0; m < modes; ++m) ms.push_back({{kd(rng), kd(rng), kd(rng)}, amp * ud(rng), 3.0 * ud(rng)});
  const double c = ud(rng);
  return ScalarField::from_function(g, [&](const Vec3& x) {
    double v = amp * c;
    for (const auto& m : ms) {
      const double th = 2.0 * M_PI * (m.k[0] * x[0] / g.length(0) + m.k[1] * x[1] / g.length(1) +
                                      m.k[2] * x[2] / g.length(2));
      v += m.a * std::sin(th + m.phase);
    }
    return v;
  });
}

inline VectorField random_smooth_vector(const Grid& g, unsigned seed, int kmax = 3, double amp = 1.0) {
  return VectorField(random_smooth(g, seed, kmax, amp), random_smooth(g, seed + 101, kmax, amp),
                     random_smooth(g, seed + 202, kmax, amp));
}

inline double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

inline double max_diff(const VectorField& a, const VectorField& b) {
  return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}

inline double max_abs(const VectorField& v) {
  return std::max({v[0].max_abs(), v[1].max_abs(), v[2].max_abs()});
}

}  // namespace zmhd::testing
