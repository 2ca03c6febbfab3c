#include "zmhd/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "zmhd/spectral.hpp"

namespace zmhd {
namespace {

double lp_of_magnitude(const ScalarField& mag, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return mag.max_abs();
  double s = 0.0;
  if (p == 2.0) {
    for (double v : mag.values()) s += v * v;
    return std::sqrt(s * mag.grid().cell_volume());
  }
  for (double v : mag.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * mag.grid().cell_volume(), 1.0 / p);
}

ScalarField hessian_sum_squares(const ScalarField& f) {
  const auto h = spectral::hessian(f);
  ScalarField out(f.grid());
  for (std::size_t n = 0; n < out.size(); ++n) {
    // off-diagonal entries appear twice in the full 3x3 matrix
    out[n] = h[0][n] * h[0][n] + h[3][n] * h[3][n] + h[5][n] * h[5][n] +
             2.0 * (h[1][n] * h[1][n] + h[2][n] * h[2][n] + h[4][n] * h[4][n]);
  }
  return out;
}

ScalarField sqrt_field(ScalarField f) {
  for (double& v : f.values()) v = std::sqrt(v);
  return f;
}

NormSuite suite(const ScalarField& mag, const ScalarField& grad_mag,
                const ScalarField& hess_mag, double q) {
  require_q(q);
  NormSuite s;
  s.q = q;
  s.l2 = lp_of_magnitude(mag, 2.0);
  s.lq = lp_of_magnitude(mag, q);
  s.linf = lp_of_magnitude(mag, kInf);
  const double g2 = lp_of_magnitude(grad_mag, 2.0), gq = lp_of_magnitude(grad_mag, q);
  s.w1_2 = s.l2 + g2;
  s.w1_q = s.lq + gq;
  s.w2_2 = s.w1_2 + lp_of_magnitude(hess_mag, 2.0);
  s.w2_q = s.w1_q + lp_of_magnitude(hess_mag, q);
  return s;
}

}  // namespace

void require_q(double q) {
  if (!(q > 3.0 && q <= 6.0)) {
    throw std::invalid_argument("exponent q must lie in (3, 6], got " + std::to_string(q));
  }
}

double lp_norm(const ScalarField& f, double p) { return lp_of_magnitude(f, p); }
double lp_norm(const VectorField& v, double p) { return lp_of_magnitude(v.magnitude(), p); }
double lp_norm(const MatrixField& m, double p) { return lp_of_magnitude(m.frobenius(), p); }

double NormSuite::lp(double p) const {
  if (p == 2.0) return l2;
  if (p == q) return lq;
  if (std::isinf(p)) return linf;
  throw std::invalid_argument("NormSuite::lp: p must be 2, q or infinity");
}

double NormSuite::sobolev_1p(double p) const {
  if (p == 2.0) return w1_2;
  if (p == q) return w1_q;
  throw std::invalid_argument("NormSuite::sobolev_1p: p must be 2 or q");
}

ScalarField hessian_magnitude(const ScalarField& f) { return sqrt_field(hessian_sum_squares(f)); }

ScalarField hessian_magnitude(const VectorField& v) {
  ScalarField s = hessian_sum_squares(v[0]);
  s += hessian_sum_squares(v[1]);
  s += hessian_sum_squares(v[2]);
  return sqrt_field(std::move(s));
}

NormSuite norms(const ScalarField& f, double q) {
  return suite(f, spectral::gradient(f).magnitude(), hessian_magnitude(f), q);
}

NormSuite norms(const VectorField& v, double q) {
  return suite(v.magnitude(), spectral::vector_gradient(v).frobenius(), hessian_magnitude(v), q);
}

}  // namespace zmhd
