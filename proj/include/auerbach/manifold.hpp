#pragma once

// The search space (S^{n-1})^n of unit-column frames: tangent projection,
// retraction, the volume of the inscribed parallelepiped and its -log
// objective, Riemannian derivatives, and the Gram-Schmidt chart
// SO(n) x (open ball) of the positive-determinant region.

#include "auerbach/bodies.hpp"
#include "auerbach/critical_search.hpp"
#include "auerbach/types.hpp"

namespace auerbach {

class Frame {
 public:
  // Columns must be Euclidean-unit within 1e-12.
  explicit Frame(Matrix cols);
  static Frame identity(int n);

  const Matrix& cols() const { return cols_; }
  int dim() const { return static_cast<int>(cols_.rows()); }
  double det() const;
  int orientation() const;  // sign of det: -1, 0, +1

 private:
  Matrix cols_;
};

class TangentVector {
 public:
  TangentVector() = default;
  explicit TangentVector(Matrix components) : components_(std::move(components)) {}
  const Matrix& components() const { return components_; }
  double norm() const { return components_.norm(); }

 private:
  Matrix components_;
};

// Per-column removal of the radial part.
TangentVector project_tangent(const Frame& frame, const Matrix& ambient);

// Per-column normalization of frame + xi; xi must be tangent within 1e-10.
Frame retract(const Frame& frame, const TangentVector& xi);

// Signed volume of the parallelepiped spanned by the boundary points
// h(v_i) v_i: det(V) * prod_i h(v_i).
double volume_g(const Body& body, const Frame& frame);

// f = -log volume_g; requires volume_g > 0.
double objective_f(const Body& body, const Frame& frame);

// Riemannian gradient of f.
TangentVector grad_f(const Body& body, const Frame& frame);

// n(n-1) x n(n-1) symmetric matrix of second derivatives of f o retract in
// the deterministic tangent chart; requires |grad f| < kHessianGradGate.
// The raw central-difference matrix's asymmetry is reported through
// symmetry_defect before symmetrization.
Matrix hessian_f(const Body& body, const Frame& frame,
                 double* symmetry_defect = nullptr);

// Chart of the positive-determinant region: a rotation together with the
// strictly-upper-triangular coefficients a_{ij} (1 <= i < j <= n) of the
// unit-column triangular factor, which satisfy sum_{i<j} a_{ij}^2 < 1.
struct GSCoordinates {
  Matrix rotation;
  Vector a;  // (i,j) lexicographic: (1,2),(1,3),...,(1,n),(2,3),...
  int dim = 0;
};

// Position of a_{ij} in the flattened vector; i, j are 1-based with i < j.
int gs_coefficient_index(int i, int j, int n);

GSCoordinates gs_factor(const Frame& frame);    // requires det > 0
Frame gs_reconstruct(const GSCoordinates& coords);

}  // namespace auerbach
