#pragma once

// Checks that a critical frame actually yields an Auerbach basis: scale the
// directions onto the boundary, invert to get the biorthogonal functionals,
// and test that every functional has unit dual norm (equivalently, that the
// hyperplane through each basis vector parallel to the others supports the
// body).

#include "auerbach/bodies.hpp"
#include "auerbach/manifold.hpp"

namespace auerbach {

struct AuerbachReport {
  Matrix scaled_basis;  // columns x_i = h(v_i) v_i on the boundary
  Matrix functionals;   // row i is the functional with <f_i, x_j> = delta_ij
  Vector dual_norms;    // dual norm of each functional; >= 1 up to roundoff
  double residual = 0.0;  // max_i |dual_norms[i] - 1|
  bool passed = false;
  double biorthogonality_defect = 0.0;
  double gauge_defect = 0.0;  // max_i |gauge(x_i) - 1|
};

// Rows of X^{-1} for an invertible matrix of boundary points; biorthogonality
// is re-verified by multiplication to 1e-9.
Matrix biorthogonal_functionals(const Matrix& boundary_points);

// The dual-norm route: independent of the solver's gradient machinery.
AuerbachReport verify_auerbach(const Body& body, const Frame& frame,
                               double tol = 1e-6);

// The supporting-hyperplane route for basis vector i; also valid for
// non-symmetric star bodies.
bool supporting_hyperplane_check(const Body& body, const Frame& frame, int i,
                                 double tol);

}  // namespace auerbach
