#include "auerbach/manifold.hpp"

#include "auerbach/sphere.hpp"

#include <Eigen/QR>

#include <cmath>

namespace auerbach {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kTangentTol = 1e-10;
constexpr double kOrthogonalTol = 1e-10;
}  // namespace

Frame::Frame(Matrix cols) : cols_(std::move(cols)) {
  if (cols_.rows() != cols_.cols() || cols_.rows() < 2) {
    throw std::invalid_argument("frame must be square with n >= 2");
  }
  for (int j = 0; j < cols_.cols(); ++j) {
    if (std::abs(cols_.col(j).norm() - 1.0) > kUnitTol) {
      throw std::invalid_argument("frame column " + std::to_string(j) +
                                  " is not a unit vector");
    }
  }
}

Frame Frame::identity(int n) { return Frame(Matrix::Identity(n, n)); }

double Frame::det() const { return cols_.determinant(); }

int Frame::orientation() const {
  const double d = det();
  return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
}

TangentVector project_tangent(const Frame& frame, const Matrix& ambient) {
  if (ambient.rows() != frame.dim() || ambient.cols() != frame.dim()) {
    throw std::invalid_argument("ambient block has wrong shape");
  }
  return TangentVector(project_columns(frame.cols(), ambient));
}

Frame retract(const Frame& frame, const TangentVector& xi) {
  const Matrix& v = frame.cols();
  const Matrix& t = xi.components();
  if (t.rows() != v.rows() || t.cols() != v.cols()) {
    throw std::invalid_argument("tangent block has wrong shape");
  }
  for (int j = 0; j < v.cols(); ++j) {
    if (std::abs(v.col(j).dot(t.col(j))) > kTangentTol) {
      throw std::invalid_argument("tangent component " + std::to_string(j) +
                                  " is not orthogonal to its column");
    }
  }
  return Frame(normalize_columns(v + t));
}

double volume_g(const Body& body, const Frame& frame) {
  double volume = frame.det();
  for (int j = 0; j < frame.dim(); ++j) {
    volume *= body.radial(frame.cols().col(j));
  }
  return volume;
}

double objective_f(const Body& body, const Frame& frame) {
  return BasisVolumeObjective(body).value(frame.cols());
}

TangentVector grad_f(const Body& body, const Frame& frame) {
  return TangentVector(
      riemannian_gradient(BasisVolumeObjective(body), frame.cols()));
}

Matrix hessian_f(const Body& body, const Frame& frame, double* symmetry_defect) {
  return numeric_hessian(BasisVolumeObjective(body), frame.cols(), symmetry_defect);
}

int gs_coefficient_index(int i, int j, int n) {
  // (1,2),(1,3),...,(1,n),(2,3),... for 1 <= i < j <= n.
  return (i - 1) * n - (i * (i - 1)) / 2 + (j - i - 1);
}

GSCoordinates gs_factor(const Frame& frame) {
  if (!(frame.det() > 0.0)) {
    throw std::invalid_argument("Gram-Schmidt chart requires det > 0");
  }
  const int n = frame.dim();
  Eigen::HouseholderQR<Matrix> qr(frame.cols());
  Matrix rotation = qr.householderQ();
  Matrix triangular = rotation.transpose() * frame.cols();
  // Fix signs so the triangular factor has a positive diagonal; this is the
  // classical Gram-Schmidt normalization.
  for (int j = 0; j < n; ++j) {
    if (triangular(j, j) < 0.0) {
      rotation.col(j) = -rotation.col(j);
      triangular.row(j) = -triangular.row(j);
    }
    if (!(triangular(j, j) > 0.0)) {
      throw NumericError("Gram-Schmidt pivot vanished");
    }
  }
  GSCoordinates coords;
  coords.dim = n;
  coords.rotation = rotation;
  coords.a = Vector(n * (n - 1) / 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      coords.a[gs_coefficient_index(i, j, n)] = triangular(i - 1, j - 1);
    }
  }
  return coords;
}

Frame gs_reconstruct(const GSCoordinates& coords) {
  const int n = coords.dim;
  if (n < 2 || coords.rotation.rows() != n || coords.rotation.cols() != n ||
      coords.a.size() != n * (n - 1) / 2) {
    throw std::invalid_argument("inconsistent Gram-Schmidt coordinates");
  }
  const Matrix gram =
      coords.rotation.transpose() * coords.rotation - Matrix::Identity(n, n);
  if (gram.cwiseAbs().maxCoeff() > kOrthogonalTol ||
      !(coords.rotation.determinant() > 0.0)) {
    throw std::invalid_argument("rotation is not special orthogonal");
  }
  Matrix triangular = Matrix::Zero(n, n);
  for (int j = 1; j <= n; ++j) {
    double sum_sq = 0.0;
    for (int i = 1; i < j; ++i) {
      const double a = coords.a[gs_coefficient_index(i, j, n)];
      triangular(i - 1, j - 1) = a;
      sum_sq += a * a;
    }
    if (!(1.0 - sum_sq > 0.0)) {
      throw std::invalid_argument(
          "triangular coefficients of column " + std::to_string(j) +
          " lie outside the open unit ball");
    }
    triangular(j - 1, j - 1) = std::sqrt(1.0 - sum_sq);
  }
  return Frame(normalize_columns(coords.rotation * triangular));
}

}  // namespace auerbach
