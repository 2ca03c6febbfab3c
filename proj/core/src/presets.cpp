#include "zmhd/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "zmhd/mms.hpp"

namespace zmhd {

std::vector<std::string> preset_names() {
  return {"rest", "small-data", "traveling-wave", "rotation", "single-mode-mms"};
}

State make_preset(const std::string& name, const Grid& g) {
  using std::cos;
  using std::sin;
  if (name == "rest") return State(g);
  if (name == "small-data") {
    // |u0| <= 0.1, |H0 - e1| <= 0.1, compressible velocity, div H0 = 0
    return State(ScalarField::from_function(g, [](const Vec3& x) { return 1.0 + 0.05 * sin(x[0]) * cos(x[1]); }),
                 VectorField::from_function(g, [](const Vec3& x) {
                   return Vec3{0.05 * (sin(x[1]) + sin(x[0])), 0.05 * sin(x[2]), 0.05 * sin(x[0])};
                 }),
                 VectorField::from_function(g, [](const Vec3& x) {
                   return Vec3{1.0 + 0.05 * sin(x[1]), 0.05 * sin(x[2]), 0.05 * sin(x[0])};
                 }));
  }
  if (name == "traveling-wave") {
    return State(ScalarField::from_function(g, [](const Vec3& x) { return 1.0 + 0.1 * sin(x[0]); }),
                 VectorField(g, {1.0, 0.0, 0.0}), VectorField(g));
  }
  if (name == "rotation") {
    // a periodic array of counter-rotating cells threaded by a vertical field
    return State(ScalarField(g, 1.0), VectorField::from_function(g, [](const Vec3& x) {
                   return Vec3{-0.1 * cos(x[0]) * sin(x[1]), 0.1 * sin(x[0]) * cos(x[1]), 0.0};
                 }),
                 VectorField(g, {0.0, 0.0, 1.0}));
  }
  if (name == "single-mode-mms") return single_mode_case().initial_state(g);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace zmhd
