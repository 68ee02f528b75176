#include "auerbach/bodies.hpp"

#include "auerbach/rng.hpp"
#include "auerbach/sphere.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace auerbach {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kRadialFdStep = 1e-6;

void check_unit(const Vector& u) {
  if (std::abs(u.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("radial queries require a Euclidean unit vector");
  }
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

std::vector<Vector> validation_sample(int n) {
  std::vector<Vector> sample;
  for (int i = 0; i < n; ++i) {
    sample.push_back(Vector::Unit(n, i));
    sample.push_back(-Vector::Unit(n, i));
  }
  NormalSampler rng(0x9e3779b97f4a7c15ull);
  for (int k = 0; k < 32 + 8 * n; ++k) sample.push_back(rng.unit_vector(n));
  return sample;
}

}  // namespace

Body Body::p_norm(int dim, double p) {
  if (dim < 2) throw std::invalid_argument("body dimension must be >= 2");
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p-norm body requires 1 < p < infinity");
  }
  Body b;
  b.variant_ = BodyVariant::PNorm;
  b.dim_ = dim;
  b.pnorm_p_ = p;
  b.known_degenerate_ = (p == 2.0);
  return b;
}

Body Body::poly_level(int dim, int m,
                      const std::map<std::vector<int>, double>& coeffs) {
  if (dim < 2) throw std::invalid_argument("body dimension must be >= 2");
  if (m < 1) throw std::invalid_argument("poly_level requires m >= 1");
  Body b;
  b.variant_ = BodyVariant::PolyLevel;
  b.dim_ = dim;
  b.poly_m_ = m;
  std::map<std::vector<int>, double> merged;
  for (const auto& [exps, c] : coeffs) {
    if (static_cast<int>(exps.size()) != dim) {
      throw std::invalid_argument("monomial exponent tuple has wrong length");
    }
    int total = 0;
    for (int e : exps) {
      if (e < 0) throw std::invalid_argument("negative monomial exponent");
      total += e;
    }
    if (total != 2 * m) {
      throw std::invalid_argument("polynomial must be homogeneous of degree 2m");
    }
    merged[exps] += c;
  }
  for (const auto& [exps, c] : merged) {
    if (c != 0.0) b.monomials_.push_back({exps, c});
  }
  if (b.monomials_.empty()) throw std::invalid_argument("polynomial is zero");
  b.validate_on_sample();
  return b;
}

Body Body::ellipsoid(const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() < 2) {
    throw std::invalid_argument("ellipsoid matrix must be square, n >= 2");
  }
  if ((q - q.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("ellipsoid matrix must be symmetric");
  }
  Body b;
  b.variant_ = BodyVariant::Ellipsoid;
  b.dim_ = static_cast<int>(q.rows());
  b.q_ = 0.5 * (q + q.transpose());
  Eigen::LLT<Matrix> llt(b.q_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("ellipsoid matrix is not positive definite");
  }
  b.q_inverse_ = llt.solve(Matrix::Identity(b.dim_, b.dim_));
  return b;
}

Body Body::from_radial_fn(int dim, std::function<double(const Vector&)> r,
                          bool symmetric, bool smooth) {
  if (dim < 2) throw std::invalid_argument("body dimension must be >= 2");
  if (!r) throw std::invalid_argument("radial function is empty");
  Body b;
  b.variant_ = BodyVariant::Radial;
  b.dim_ = dim;
  b.symmetric_ = symmetric;
  b.smooth_ = smooth;
  b.radial_fn_ = std::move(r);
  b.validate_on_sample();
  return b;
}

void Body::validate_on_sample() const {
  for (const Vector& u : validation_sample(dim_)) {
    if (variant_ == BodyVariant::PolyLevel) {
      if (!(poly_value(u) > 0.0)) {
        throw std::invalid_argument(
            "polynomial is not positive on the unit sphere");
      }
    } else if (variant_ == BodyVariant::Radial) {
      const double r = radial_fn_(u);
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("radial function is not positive");
      }
      if (symmetric_) {
        const double r_neg = radial_fn_(-u);
        if (std::abs(r - r_neg) > 1e-12 * std::max(1.0, std::abs(r))) {
          throw std::invalid_argument(
              "radial function flagged symmetric but r(u) != r(-u)");
        }
      }
    }
  }
}

double Body::poly_value(const Vector& v) const {
  double total = 0.0;
  for (const Monomial& mono : monomials_) {
    double term = mono.coeff;
    for (int i = 0; i < dim_; ++i) term *= ipow(v[i], mono.exponents[i]);
    total += term;
  }
  return total;
}

Vector Body::poly_gradient(const Vector& v) const {
  Vector g = Vector::Zero(dim_);
  for (const Monomial& mono : monomials_) {
    for (int i = 0; i < dim_; ++i) {
      const int e = mono.exponents[i];
      if (e == 0) continue;
      double term = mono.coeff * e * ipow(v[i], e - 1);
      for (int j = 0; j < dim_; ++j) {
        if (j != i) term *= ipow(v[j], mono.exponents[j]);
      }
      g[i] += term;
    }
  }
  return g;
}

double Body::radial(const Vector& u) const {
  check_unit(u);
  switch (variant_) {
    case BodyVariant::PNorm: {
      double sum = 0.0;
      for (int i = 0; i < dim_; ++i) sum += std::pow(std::abs(u[i]), pnorm_p_);
      return 1.0 / std::pow(sum, 1.0 / pnorm_p_);
    }
    case BodyVariant::PolyLevel: {
      const double p = poly_value(u);
      if (!(p > 0.0)) throw NumericError("polynomial gauge vanished on the sphere");
      return std::pow(p, -1.0 / (2.0 * poly_m_));
    }
    case BodyVariant::Ellipsoid:
      return 1.0 / std::sqrt(u.dot(q_ * u));
    case BodyVariant::Radial: {
      const double r = radial_fn_(u);
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw NumericError("radial function returned a non-positive value");
      }
      return r;
    }
  }
  throw std::logic_error("unreachable body variant");
}

Vector Body::radial_log_gradient(const Vector& u) const {
  check_unit(u);
  switch (variant_) {
    case BodyVariant::PNorm: {
      double sum = 0.0;
      Vector g(dim_);
      for (int i = 0; i < dim_; ++i) sum += std::pow(std::abs(u[i]), pnorm_p_);
      for (int i = 0; i < dim_; ++i) {
        const double mag = std::pow(std::abs(u[i]), pnorm_p_ - 1.0);
        g[i] = -(u[i] >= 0.0 ? mag : -mag) / sum;
      }
      return g;
    }
    case BodyVariant::PolyLevel: {
      const double p = poly_value(u);
      return -poly_gradient(u) / (2.0 * poly_m_ * p);
    }
    case BodyVariant::Ellipsoid: {
      // Zero-homogeneous extension: log h(x) = -0.5 log(x'Qx / x'x), so the
      // gradient vanishes identically for the round ball.
      Vector qu = q_ * u;
      return u - qu / u.dot(qu);
    }
    case BodyVariant::Radial: {
      if (!smooth_) {
        throw std::invalid_argument(
            "radial body is not flagged smooth; derivative paths refused");
      }
      // Tangential finite differences on the sphere chart; the radial
      // component of log h is unobservable here and projected away by
      // every caller.
      const Matrix basis = column_tangent_basis(u);
      Vector g = Vector::Zero(dim_);
      for (int k = 0; k < basis.cols(); ++k) {
        const Vector step = kRadialFdStep * basis.col(k);
        const double forward = std::log(radial(sphere_retract(u, step)));
        const double backward = std::log(radial(sphere_retract(u, -step)));
        g += (forward - backward) / (2.0 * kRadialFdStep) * basis.col(k);
      }
      return g;
    }
  }
  throw std::logic_error("unreachable body variant");
}

double Body::gauge(const Vector& x) const {
  const double norm = x.norm();
  if (norm == 0.0) return 0.0;
  switch (variant_) {
    case BodyVariant::PNorm: {
      double sum = 0.0;
      for (int i = 0; i < dim_; ++i) sum += std::pow(std::abs(x[i]), pnorm_p_);
      return std::pow(sum, 1.0 / pnorm_p_);
    }
    case BodyVariant::PolyLevel:
      return std::pow(poly_value(x), 1.0 / (2.0 * poly_m_));
    case BodyVariant::Ellipsoid:
      return std::sqrt(x.dot(q_ * x));
    case BodyVariant::Radial:
      return norm / radial(x / norm);
  }
  throw std::logic_error("unreachable body variant");
}

double Body::dual_norm(const Vector& phi, double tol) const {
  if (phi.size() != dim_) throw std::invalid_argument("functional has wrong dimension");
  if (phi.norm() == 0.0) return 0.0;
  switch (variant_) {
    case BodyVariant::PNorm: {
      const double q = pnorm_p_ / (pnorm_p_ - 1.0);
      double sum = 0.0;
      for (int i = 0; i < dim_; ++i) sum += std::pow(std::abs(phi[i]), q);
      return std::pow(sum, 1.0 / q);
    }
    case BodyVariant::Ellipsoid:
      return std::sqrt(phi.dot(q_inverse_ * phi));
    case BodyVariant::PolyLevel:
      return support_search(phi, tol).value;
    case BodyVariant::Radial:
      if (!symmetric_) {
        throw std::invalid_argument(
            "dual norm of a non-symmetric body is undefined; use support_value");
      }
      return support_search(phi, tol).value;
  }
  throw std::logic_error("unreachable body variant");
}

SupportPoint Body::support_value(const Vector& phi, double tol) const {
  if (phi.size() != dim_) throw std::invalid_argument("functional has wrong dimension");
  if (phi.norm() == 0.0) throw std::invalid_argument("support of the zero functional");
  return support_search(phi, tol);
}

SupportPoint Body::support_search(const Vector& phi, double tol) const {
  const int n = dim_;
  auto value_at = [&](const Vector& u) { return radial(u) * phi.dot(u); };

  std::vector<Vector> starts;
  starts.push_back(phi.normalized());
  starts.push_back(-phi.normalized());
  NormalSampler rng(0x51a7e5ull);
  for (int k = 0; k < 4 * n; ++k) starts.push_back(rng.unit_vector(n));

  double best_value = -std::numeric_limits<double>::infinity();
  Vector best_u;
  bool any_converged = false;

  for (Vector u : starts) {
    double value = value_at(u);
    bool converged = false;
    if (smooth_) {
      auto tangent_grad = [&](const Vector& at) {
        const double h = radial(at);
        const Vector grad_h = h * radial_log_gradient(at);
        return Vector(sphere_project(at, phi.dot(at) * grad_h + h * phi));
      };
      // Phase 1: projected gradient ascent with backtracking. Two
      // ascent-side exits certify the value even when the gradient target
      // is missed: a hard stall (no step of any size gains one ulp), and
      // window stagnation (50 iterations gain < 1e-10 and decaying, so the
      // geometric tail is ~1e-9 at most). Both arise for p < 2 bodies
      // whose maximizer sits at a C^1-only kink.
      double step = 1.0 / std::max(1.0, phi.norm());
      bool stalled = false;
      double window_base = value;
      double prev_window_gain = std::numeric_limits<double>::infinity();
      for (int iter = 0; iter < 1500; ++iter) {
        const Vector g = tangent_grad(u);
        const double gn = g.norm();
        const double scale = std::max(1.0, std::abs(value));
        if (gn <= tol * scale) {
          converged = true;
          break;
        }
        bool moved = false;
        while (step > 1e-16) {
          const Vector u_trial = sphere_retract(u, step * g);
          const double v_trial = value_at(u_trial);
          if (v_trial > value + 1e-4 * step * gn * gn) {
            u = u_trial;
            value = v_trial;
            step = std::min(step * 2.0, 1e3);
            moved = true;
            break;
          }
          step *= 0.5;
        }
        if (!moved) {
          stalled = true;
          break;
        }
        if (iter % 50 == 49) {
          const double window_gain = value - window_base;
          if (window_gain < 1e-10 * scale && window_gain <= prev_window_gain) {
            stalled = true;
            break;
          }
          prev_window_gain = window_gain;
          window_base = value;
        }
      }
      // Phase 2: Newton on the tangent chart; quadratic convergence takes
      // the gradient below tol wherever the objective is C^2.
      double gn = tangent_grad(u).norm();
      for (int iter = 0; iter < 40 && !converged; ++iter) {
        const double scale = std::max(1.0, std::abs(value));
        if (gn <= tol * scale) {
          converged = true;
          break;
        }
        const Matrix basis = column_tangent_basis(u);
        const int k = static_cast<int>(basis.cols());
        const Vector coords = basis.transpose() * tangent_grad(u);
        Matrix hess(k, k);
        const double fd = 1e-5;
        for (int t = 0; t < k; ++t) {
          const Vector up = tangent_grad(sphere_retract(u, fd * basis.col(t)));
          const Vector dn = tangent_grad(sphere_retract(u, -fd * basis.col(t)));
          hess.col(t) = basis.transpose() * (up - dn) / (2.0 * fd);
        }
        const Vector delta = hess.fullPivLu().solve(-coords);
        bool improved = false;
        double damp = 1.0;
        for (int bt = 0; bt < 8 && !improved; ++bt, damp *= 0.5) {
          const Vector u_trial = sphere_retract(u, damp * (basis * delta));
          const double gn_trial = tangent_grad(u_trial).norm();
          if (gn_trial < gn) {
            u = u_trial;
            gn = gn_trial;
            value = value_at(u);
            improved = true;
          }
        }
        if (!improved) break;
      }
      if (!converged) {
        // Newton could not reach the gradient target (it cannot engage at a
        // C^1-only kink, or zigzags at its roundoff floor). With ascent-side
        // stall evidence the value is certified to ~1e-9 relative; without
        // it be conservative.
        converged =
            gn <= (stalled ? 1e-3 : 1e-4) * std::max(1.0, std::abs(value));
      }
    } else {
      // Derivative-free compass search in tangent directions.
      double step = 0.5;
      while (step >= 1e-9) {
        const Matrix basis = column_tangent_basis(u);
        double best_trial = value;
        Vector best_dir;
        for (int k = 0; k < basis.cols(); ++k) {
          for (double s : {step, -step}) {
            const Vector u_trial = sphere_retract(u, s * basis.col(k));
            const double v_trial = value_at(u_trial);
            if (v_trial > best_trial) {
              best_trial = v_trial;
              best_dir = u_trial;
            }
          }
        }
        if (best_trial > value) {
          u = best_dir;
          value = best_trial;
        } else {
          step *= 0.5;
        }
      }
      converged = true;
    }
    if (value > best_value) {
      best_value = value;
      best_u = u;
    }
    any_converged = any_converged || converged;
  }

  SupportPoint result;
  result.value = best_value;
  result.argmax = radial(best_u) * best_u;
  if (!any_converged) {
    throw SupportError("support maximization did not converge", result);
  }
  return result;
}

std::string Body::describe() const {
  std::ostringstream out;
  switch (variant_) {
    case BodyVariant::PNorm:
      out << "pnorm(n=" << dim_ << ", p=" << pnorm_p_ << ")";
      break;
    case BodyVariant::PolyLevel:
      out << "poly_level(n=" << dim_ << ", degree=" << 2 * poly_m_
          << ", terms=" << monomials_.size() << ")";
      break;
    case BodyVariant::Ellipsoid:
      out << "ellipsoid(n=" << dim_ << ")";
      break;
    case BodyVariant::Radial:
      out << "radial_fn(n=" << dim_ << (symmetric_ ? ", symmetric" : "")
          << (smooth_ ? ", smooth" : "") << ")";
      break;
  }
  return out.str();
}

}  // namespace auerbach
