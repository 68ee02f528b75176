#pragma once

// Generic critical-point machinery on a product of unit spheres: projected
// gradients in deterministic tangent charts, Gauss-Newton refinement of the
// squared-gradient merit function, and finite-difference Morse data.
// The basis problem uses ambient_dim sphere factors, the inscribed-simplex
// problem ambient_dim + 1; everything here is shared between the two.

#include "auerbach/bodies.hpp"
#include "auerbach/sphere.hpp"

#include <string>
#include <vector>

namespace auerbach {

class SphereProductObjective {
 public:
  virtual ~SphereProductObjective() = default;
  virtual int ambient_dim() const = 0;
  virtual int factor_count() const = 0;
  // Both throw NumericError when cols is outside the admissible domain.
  virtual double value(const Matrix& cols) const = 0;
  virtual Matrix ambient_gradient(const Matrix& cols) const = 0;
};

// f = -log(det V * prod_i h(v_i)) on factor_count == ambient_dim spheres,
// defined where the determinant is positive.
class BasisVolumeObjective final : public SphereProductObjective {
 public:
  explicit BasisVolumeObjective(const Body& body) : body_(&body) {}
  int ambient_dim() const override { return body_->dim(); }
  int factor_count() const override { return body_->dim(); }
  double value(const Matrix& cols) const override;
  Matrix ambient_gradient(const Matrix& cols) const override;

 private:
  const Body* body_;
};

// f = -log |vol(b_0..b_n)| with b_i = h(u_i) u_i, on ambient_dim + 1 spheres.
class SimplexVolumeObjective final : public SphereProductObjective {
 public:
  explicit SimplexVolumeObjective(const Body& body) : body_(&body) {}
  int ambient_dim() const override { return body_->dim(); }
  int factor_count() const override { return body_->dim() + 1; }
  double value(const Matrix& cols) const override;
  Matrix ambient_gradient(const Matrix& cols) const override;

 private:
  const Body* body_;
};

// Tangent-projected ambient gradient (one column per sphere factor).
Matrix riemannian_gradient(const SphereProductObjective& obj, const Matrix& cols);
double riemannian_gradient_norm(const SphereProductObjective& obj, const Matrix& cols);

struct RefineSettings {
  double crit_tol = 1e-9;
  int max_iters = 2000;
  double jacobian_fd_step = 1e-6;
};

struct RefineResult {
  bool converged = false;
  Matrix cols;
  double grad_norm = 0.0;
  int iterations = 0;
  std::string failure;  // empty when converged; "max_iters" / "stalled" / "left_domain"
};

// Minimizes 0.5 * |grad|^2 by damped Gauss-Newton on the gradient field,
// with backtracking on each proposed step. Saddle points are found on an
// equal footing with extrema. After reaching crit_tol the point is polished
// further toward machine precision so that members of one critical orbit
// canonicalize identically.
RefineResult refine_critical_point(const SphereProductObjective& obj,
                                   Matrix start, const RefineSettings& settings);

inline constexpr double kGradientFdStep = 1e-6;
inline constexpr double kHessianFdStep = 1e-4;
inline constexpr double kHessianGradGate = 1e-6;
inline constexpr double kNullTolFactor = 1e-4;

// Second derivatives of f in the deterministic orthonormal tangent chart,
// by central differences of the projected gradient field (step 1e-4),
// returned symmetrized. Only meaningful near critical points, enforced via
// the gradient gate.
Matrix numeric_hessian(const SphereProductObjective& obj, const Matrix& cols,
                       double* symmetry_defect = nullptr);

struct MorseData {
  Vector eigenvalues;  // ascending
  int index = 0;
  int nullity = 0;
  bool degenerate = false;
};

MorseData classify_morse(const SphereProductObjective& obj, const Matrix& cols);
MorseData morse_from_eigenvalues(const Vector& eigenvalues);

}  // namespace auerbach
