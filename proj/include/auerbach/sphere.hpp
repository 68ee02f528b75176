#pragma once

// Elementary geometry of the unit sphere S^{n-1} and of products of
// spheres represented as unit-column matrices.

#include "auerbach/types.hpp"

#include <cmath>
#include <vector>

namespace auerbach {

inline Vector sphere_project(const Vector& u, const Vector& ambient) {
  return ambient - u.dot(ambient) * u;
}

inline Vector sphere_retract(const Vector& u, const Vector& xi) {
  Vector w = u + xi;
  const double norm = w.norm();
  if (!(norm > 0.0)) throw NumericError("sphere retraction hit the origin");
  return w / norm;
}

// Orthonormal basis of the tangent space at a unit vector u, built by
// Gram-Schmidt of the coordinate axes against u. The axis most aligned
// with u is dropped, so the construction is deterministic in u and the
// remaining n-1 axes always span the tangent space.
inline Matrix column_tangent_basis(const Vector& u) {
  const int n = static_cast<int>(u.size());
  int drop = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(u[i]) > std::abs(u[drop])) drop = i;
  }
  Matrix basis(n, n - 1);
  int c = 0;
  for (int i = 0; i < n; ++i) {
    if (i == drop) continue;
    Vector w = Vector::Unit(n, i);
    w -= u.dot(w) * u;
    for (int k = 0; k < c; ++k) w -= basis.col(k).dot(w) * basis.col(k);
    const double norm = w.norm();
    if (!(norm > 1e-12)) throw NumericError("degenerate tangent basis");
    basis.col(c++) = w / norm;
  }
  return basis;
}

inline Matrix project_columns(const Matrix& cols, const Matrix& ambient) {
  Matrix out(ambient.rows(), ambient.cols());
  for (int j = 0; j < cols.cols(); ++j) {
    out.col(j) = sphere_project(cols.col(j), ambient.col(j));
  }
  return out;
}

inline Matrix normalize_columns(const Matrix& m) {
  Matrix out = m;
  for (int j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (!(norm > 0.0)) throw NumericError("cannot normalize a zero column");
    out.col(j) /= norm;
  }
  return out;
}

inline std::vector<Matrix> product_tangent_bases(const Matrix& cols) {
  std::vector<Matrix> bases;
  bases.reserve(cols.cols());
  for (int j = 0; j < cols.cols(); ++j) {
    bases.push_back(column_tangent_basis(cols.col(j)));
  }
  return bases;
}

}  // namespace auerbach
