#pragma once

#include <limits>

#include "zmhd/field.hpp"

namespace zmhd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Throws unless q lies in (3, 6].
void require_q(double q);

/// Midpoint-rule L^p norm (p = kInf gives the max). Vector and matrix
/// fields use the pointwise Euclidean / Frobenius magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);
double lp_norm(const MatrixField& m, double p);

/// Norms of one field. Sobolev norms are sums of L^p norms of the field and
/// its spectral derivatives: |f|_p + |grad f|_p (+ |hess f|_p).
struct NormSuite {
  double q = 6.0;
  double l2 = 0.0;
  double lq = 0.0;
  double linf = 0.0;
  double w1_2 = 0.0;
  double w1_q = 0.0;
  double w2_2 = 0.0;
  double w2_q = 0.0;

  /// p must be 2, q, or kInf.
  double lp(double p) const;
  /// p must be 2 or q.
  double sobolev_1p(double p) const;
  double sobolev_2q() const { return w2_q; }
};

NormSuite norms(const ScalarField& f, double q = 6.0);
NormSuite norms(const VectorField& v, double q = 6.0);

/// Pointwise Frobenius magnitude of the second derivatives.
ScalarField hessian_magnitude(const ScalarField& f);
ScalarField hessian_magnitude(const VectorField& v);

}  // namespace zmhd
