#include "auerbach/verify.hpp"

#include <Eigen/LU>

#include <cmath>

namespace auerbach {

namespace {

Matrix scaled_boundary_basis(const Body& body, const Frame& frame) {
  Matrix x = frame.cols();
  for (int j = 0; j < frame.dim(); ++j) {
    x.col(j) *= body.radial(frame.cols().col(j));
  }
  return x;
}

}  // namespace

Matrix biorthogonal_functionals(const Matrix& boundary_points) {
  if (boundary_points.rows() != boundary_points.cols()) {
    throw std::invalid_argument("boundary-point matrix must be square");
  }
  Eigen::PartialPivLU<Matrix> lu(boundary_points);
  const double det = lu.determinant();
  if (!(std::abs(det) > 1e-12)) {
    throw NumericError("boundary points are numerically dependent");
  }
  Matrix functionals = lu.inverse();
  const int n = static_cast<int>(boundary_points.rows());
  const double defect = (functionals * boundary_points - Matrix::Identity(n, n))
                            .cwiseAbs()
                            .maxCoeff();
  if (defect > 1e-9) {
    throw NumericError("biorthogonality defect " + std::to_string(defect) +
                       " exceeds 1e-9; matrix too ill-conditioned");
  }
  return functionals;
}

AuerbachReport verify_auerbach(const Body& body, const Frame& frame, double tol) {
  if (!body.symmetric()) {
    throw std::invalid_argument(
        "Auerbach verification needs a centrally symmetric body; use the "
        "supporting-hyperplane check instead");
  }
  const int n = frame.dim();
  AuerbachReport report;
  report.scaled_basis = scaled_boundary_basis(body, frame);
  report.functionals = biorthogonal_functionals(report.scaled_basis);
  report.biorthogonality_defect =
      (report.functionals * report.scaled_basis - Matrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  report.dual_norms = Vector(n);
  report.gauge_defect = 0.0;
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    report.dual_norms[i] = body.dual_norm(report.functionals.row(i).transpose());
    residual = std::max(residual, std::abs(report.dual_norms[i] - 1.0));
    report.gauge_defect = std::max(
        report.gauge_defect, std::abs(body.gauge(report.scaled_basis.col(i)) - 1.0));
  }
  report.residual = residual;
  report.passed = residual < tol;
  return report;
}

bool supporting_hyperplane_check(const Body& body, const Frame& frame, int i,
                                 double tol) {
  if (i < 0 || i >= frame.dim()) {
    throw std::invalid_argument("basis index out of range");
  }
  const Matrix x = scaled_boundary_basis(body, frame);
  const Matrix functionals = biorthogonal_functionals(x);
  const Vector phi = functionals.row(i).transpose();
  const SupportPoint support = body.support_value(phi);
  return support.value <= phi.dot(x.col(i)) + tol;
}

}  // namespace auerbach
