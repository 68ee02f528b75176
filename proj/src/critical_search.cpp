#include "auerbach/critical_search.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace auerbach {

namespace {

// Coordinates of a tangent matrix in the per-factor orthonormal bases,
// factor-major: entry j*(n-1)+t pairs factor j with basis direction t.
Vector chart_coords(const Matrix& tangent, const std::vector<Matrix>& bases) {
  const int m = static_cast<int>(bases.size());
  const int k = static_cast<int>(bases[0].cols());
  Vector coords(m * k);
  for (int j = 0; j < m; ++j) {
    coords.segment(j * k, k) = bases[j].transpose() * tangent.col(j);
  }
  return coords;
}

Matrix chart_retract(const Matrix& cols, const std::vector<Matrix>& bases,
                     const Vector& delta) {
  const int k = static_cast<int>(bases[0].cols());
  Matrix out = cols;
  for (int j = 0; j < cols.cols(); ++j) {
    out.col(j) = sphere_retract(cols.col(j), bases[j] * delta.segment(j * k, k));
  }
  return out;
}

}  // namespace

double BasisVolumeObjective::value(const Matrix& cols) const {
  const double det = cols.determinant();
  if (!(det > 0.0)) {
    throw NumericError("frame left the positive-determinant region");
  }
  double log_h = 0.0;
  for (int j = 0; j < cols.cols(); ++j) {
    log_h += std::log(body_->radial(cols.col(j)));
  }
  return -std::log(det) - log_h;
}

Matrix BasisVolumeObjective::ambient_gradient(const Matrix& cols) const {
  Eigen::PartialPivLU<Matrix> lu(cols);
  const double det = lu.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw NumericError("frame left the positive-determinant region");
  }
  Matrix grad = -lu.inverse().transpose();
  for (int j = 0; j < cols.cols(); ++j) {
    grad.col(j) -= body_->radial_log_gradient(cols.col(j));
  }
  return grad;
}

double SimplexVolumeObjective::value(const Matrix& cols) const {
  const int n = ambient_dim();
  Matrix edges(n, n);
  const Vector b0 = body_->radial(cols.col(0)) * cols.col(0);
  for (int i = 1; i <= n; ++i) {
    edges.col(i - 1) = body_->radial(cols.col(i)) * cols.col(i) - b0;
  }
  const double det = edges.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw NumericError("degenerate simplex has no volume objective");
  }
  double log_factorial = 0.0;
  for (int i = 2; i <= n; ++i) log_factorial += std::log(static_cast<double>(i));
  return log_factorial - std::log(std::abs(det));
}

Matrix SimplexVolumeObjective::ambient_gradient(const Matrix& cols) const {
  const int n = ambient_dim();
  const int m = n + 1;
  std::vector<double> h(m);
  std::vector<Vector> vertices(m);
  for (int i = 0; i < m; ++i) {
    h[i] = body_->radial(cols.col(i));
    vertices[i] = h[i] * cols.col(i);
  }
  Matrix edges(n, n);
  for (int i = 1; i <= n; ++i) edges.col(i - 1) = vertices[i] - vertices[0];
  Eigen::PartialPivLU<Matrix> lu(edges);
  const double det = lu.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw NumericError("degenerate simplex has no gradient");
  }
  const Matrix inv = lu.inverse();

  // d(-log|det|) with respect to the vertices: -c_i for vertex i >= 1 and
  // +sum_i c_i for vertex 0, where c_i is row i of the edge-matrix inverse.
  std::vector<Vector> vertex_grad(m, Vector::Zero(n));
  for (int i = 1; i <= n; ++i) {
    const Vector ci = inv.row(i - 1).transpose();
    vertex_grad[i] = -ci;
    vertex_grad[0] += ci;
  }
  Matrix grad(n, m);
  for (int i = 0; i < m; ++i) {
    const Vector grad_h = h[i] * body_->radial_log_gradient(cols.col(i));
    grad.col(i) =
        h[i] * vertex_grad[i] + grad_h * cols.col(i).dot(vertex_grad[i]);
  }
  return grad;
}

Matrix riemannian_gradient(const SphereProductObjective& obj, const Matrix& cols) {
  return project_columns(cols, obj.ambient_gradient(cols));
}

double riemannian_gradient_norm(const SphereProductObjective& obj,
                                const Matrix& cols) {
  return riemannian_gradient(obj, cols).norm();
}

RefineResult refine_critical_point(const SphereProductObjective& obj,
                                   Matrix cols, const RefineSettings& settings) {
  const int n = obj.ambient_dim();
  const int m = obj.factor_count();
  const int d = m * (n - 1);

  RefineResult result;
  Matrix grad;
  try {
    grad = riemannian_gradient(obj, cols);
  } catch (const NumericError&) {
    result.cols = cols;
    result.failure = "left_domain";
    return result;
  }
  double grad_norm = grad.norm();
  double lambda = 1e-3;

  auto jacobian_at = [&](const std::vector<Matrix>& bases, double step) {
    Matrix jac(d, d);
    for (int b = 0; b < d; ++b) {
      Vector delta = Vector::Zero(d);
      delta[b] = step;
      const Vector forward =
          chart_coords(riemannian_gradient(obj, chart_retract(cols, bases, delta)), bases);
      const Vector backward =
          chart_coords(riemannian_gradient(obj, chart_retract(cols, bases, -delta)), bases);
      jac.col(b) = (forward - backward) / (2.0 * step);
    }
    return jac;
  };

  int iterations = 0;
  std::string failure;
  while (grad_norm >= settings.crit_tol && failure.empty()) {
    if (iterations >= settings.max_iters) {
      failure = "max_iters";
      break;
    }
    const std::vector<Matrix> bases = product_tangent_bases(cols);
    const Vector coords = chart_coords(grad, bases);
    Matrix jac;
    try {
      jac = jacobian_at(bases, settings.jacobian_fd_step);
    } catch (const NumericError&) {
      failure = "left_domain";
      break;
    }
    const Matrix gram = jac.transpose() * jac;
    const Vector rhs = -jac.transpose() * coords;
    const double merit = 0.5 * grad_norm * grad_norm;

    bool accepted = false;
    while (!accepted) {
      Matrix damped = gram;
      damped.diagonal().array() += lambda;
      const Vector step = damped.ldlt().solve(rhs);
      double scale = 1.0;
      for (int bt = 0; bt < 9 && !accepted; ++bt, scale *= 0.5) {
        try {
          const Matrix trial = chart_retract(cols, bases, scale * step);
          const Matrix trial_grad = riemannian_gradient(obj, trial);
          if (0.5 * trial_grad.squaredNorm() < merit) {
            cols = trial;
            grad = trial_grad;
            grad_norm = grad.norm();
            accepted = true;
          }
        } catch (const NumericError&) {
          // trial stepped outside the domain; shrink
        }
      }
      if (accepted) {
        lambda = std::max(lambda * 0.3, 1e-14);
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) {
          failure = "stalled";
          break;
        }
      }
    }
    ++iterations;
  }

  result.iterations = iterations;
  result.converged = failure.empty() && grad_norm < settings.crit_tol;
  result.failure = failure;

  if (result.converged) {
    // Polish with undamped Gauss-Newton steps; each must strictly reduce
    // the gradient norm. Keeps one orbit's members within ~1e-12 of each
    // other, which the canonical-form tie rules rely on.
    for (int k = 0; k < 10 && grad_norm > 1e-14; ++k) {
      try {
        const std::vector<Matrix> bases = product_tangent_bases(cols);
        const Vector coords = chart_coords(grad, bases);
        const Matrix jac = jacobian_at(bases, settings.jacobian_fd_step);
        Matrix gram = jac.transpose() * jac;
        gram.diagonal().array() += 1e-14;
        const Vector step = gram.ldlt().solve(-jac.transpose() * coords);
        const Matrix trial = chart_retract(cols, bases, step);
        const Matrix trial_grad = riemannian_gradient(obj, trial);
        if (trial_grad.norm() < grad_norm) {
          cols = trial;
          grad = trial_grad;
          grad_norm = grad.norm();
        } else {
          break;
        }
      } catch (const NumericError&) {
        break;
      }
    }
  }

  result.cols = cols;
  result.grad_norm = grad_norm;
  return result;
}

Matrix numeric_hessian(const SphereProductObjective& obj, const Matrix& cols,
                       double* symmetry_defect) {
  const int n = obj.ambient_dim();
  const int m = obj.factor_count();
  const int d = m * (n - 1);
  const double grad_norm = riemannian_gradient_norm(obj, cols);
  if (grad_norm >= kHessianGradGate) {
    throw std::invalid_argument(
        "hessian requested away from a critical point (gradient norm " +
        std::to_string(grad_norm) + ")");
  }
  const std::vector<Matrix> bases = product_tangent_bases(cols);
  Matrix hess(d, d);
  for (int b = 0; b < d; ++b) {
    Vector delta = Vector::Zero(d);
    delta[b] = kHessianFdStep;
    const Vector forward =
        chart_coords(riemannian_gradient(obj, chart_retract(cols, bases, delta)), bases);
    const Vector backward =
        chart_coords(riemannian_gradient(obj, chart_retract(cols, bases, -delta)), bases);
    hess.col(b) = (forward - backward) / (2.0 * kHessianFdStep);
  }
  const double defect = (hess - hess.transpose()).cwiseAbs().maxCoeff();
  if (symmetry_defect != nullptr) *symmetry_defect = defect;
  return 0.5 * (hess + hess.transpose());
}

MorseData morse_from_eigenvalues(const Vector& eigenvalues) {
  MorseData data;
  data.eigenvalues = eigenvalues;
  const double max_abs =
      eigenvalues.size() > 0 ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double null_tol = kNullTolFactor * max_abs;
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < -null_tol) {
      ++data.index;
    } else if (std::abs(eigenvalues[i]) <= null_tol) {
      ++data.nullity;
    }
  }
  data.degenerate = data.nullity > 0;
  return data;
}

MorseData classify_morse(const SphereProductObjective& obj, const Matrix& cols) {
  const Matrix hess = numeric_hessian(obj, cols);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hess);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hessian eigenvalue computation failed");
  }
  return morse_from_eigenvalues(solver.eigenvalues());
}

}  // namespace auerbach
