#pragma once

// Convex / star-shaped bodies given by a gauge family. A body is queried
// through its radial function h(u) (the scale putting a unit direction u
// on the boundary), the gradient of log h, the dual norm, and support
// maximization over the boundary.

#include "auerbach/types.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace auerbach {

enum class BodyVariant { PNorm, PolyLevel, Ellipsoid, Radial };

struct Monomial {
  std::vector<int> exponents;  // one entry per coordinate, summing to 2m
  double coeff = 0.0;
};

struct SupportPoint {
  double value = 0.0;
  Vector argmax;  // boundary point attaining the value
};

// Support maximization ran out of budget; carries the best point seen.
class SupportError : public NumericError {
 public:
  SupportError(const std::string& what, SupportPoint best)
      : NumericError(what), best_so_far(std::move(best)) {}
  SupportPoint best_so_far;
};

class Body {
 public:
  // Unit ball of the p-norm, p > 1. p = 2 is accepted but reported as
  // known-degenerate (its critical frames form continua).
  static Body p_norm(int dim, double p);

  // { P(v) <= 1 } for an even homogeneous polynomial P of degree 2m,
  // positive away from the origin. Monomials are keyed by exponent tuples.
  static Body poly_level(int dim, int m,
                         const std::map<std::vector<int>, double>& coeffs);

  // { v : v'Qv <= 1 } for symmetric positive-definite Q.
  static Body ellipsoid(const Matrix& q);

  // Star-shaped body given by its radial function on unit vectors.
  // Convexity is not checked; only positivity (and symmetry when flagged).
  static Body from_radial_fn(int dim, std::function<double(const Vector&)> r,
                             bool symmetric, bool smooth);

  int dim() const { return dim_; }
  BodyVariant variant() const { return variant_; }
  bool symmetric() const { return symmetric_; }
  bool smooth() const { return smooth_; }
  bool known_degenerate() const { return known_degenerate_; }
  std::string describe() const;

  // h(u) with h(u)*u on the boundary; u must be Euclidean-unit (1e-12).
  double radial(const Vector& u) const;

  // Ambient gradient of log h at a unit vector, before tangent projection.
  // Closed forms for PNorm/PolyLevel/Ellipsoid; central finite differences
  // (step 1e-6, sphere chart) for smooth radial bodies.
  Vector radial_log_gradient(const Vector& u) const;

  // Minkowski functional of x (gauge norm); gauge(boundary point) = 1.
  double gauge(const Vector& x) const;

  // sup { <phi, y> : y on the boundary }, for centrally symmetric bodies.
  // Holder / ellipsoid closed forms where available, otherwise multistart
  // projected ascent on the sphere with 4*dim random starts.
  double dual_norm(const Vector& phi, double tol = 1e-10) const;

  // Numeric support maximization; also valid for non-symmetric bodies.
  SupportPoint support_value(const Vector& phi, double tol = 1e-10) const;

  // Serialization accessors.
  double pnorm_exponent() const { return pnorm_p_; }
  int poly_degree_half() const { return poly_m_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const Matrix& ellipsoid_q() const { return q_; }

 private:
  Body() = default;
  void validate_on_sample() const;
  double poly_value(const Vector& v) const;
  Vector poly_gradient(const Vector& v) const;
  SupportPoint support_search(const Vector& phi, double tol) const;

  BodyVariant variant_ = BodyVariant::PNorm;
  int dim_ = 0;
  bool symmetric_ = true;
  bool smooth_ = true;
  bool known_degenerate_ = false;

  double pnorm_p_ = 0.0;
  int poly_m_ = 0;
  std::vector<Monomial> monomials_;
  Matrix q_;
  Matrix q_inverse_;
  std::function<double(const Vector&)> radial_fn_;
};

}  // namespace auerbach
