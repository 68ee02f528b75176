#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: a GF(2) linear-algebra computation of the graded quotient-ring
// dimensions behind the flag Poincare series, finite-difference derivative
// probes, random group elements, and an exhaustive two-angle grid
// enumeration of critical orbits for n = 2.

#include "auerbach/bodies.hpp"
#include "auerbach/manifold.hpp"
#include "auerbach/rng.hpp"
#include "auerbach/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace auerbach::testing {

// ---------------------------------------------------------------------------
// Graded dimensions of Z2[x_1..x_n] / (sym_1..sym_n) by rank computation.

inline void enumerate_exponents(int n, int degree,
                                std::vector<std::vector<int>>& out,
                                std::vector<int>& current, int pos) {
  if (pos == n - 1) {
    current[pos] = degree;
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= degree; ++e) {
    current[pos] = e;
    enumerate_exponents(n, degree - e, out, current, pos + 1);
  }
}

inline std::vector<std::vector<int>> monomials_of_degree(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  enumerate_exponents(n, degree, out, current, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> subset(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      out.push_back(subset);
      return;
    }
    for (int i = start; i < n; ++i) {
      subset[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

// Dimension of the degree-d piece of the quotient ring, via Gaussian
// elimination over GF(2) on the span of { m * sym_k : deg m = d - k }.
inline int quotient_ring_dim_z2(int n, int degree) {
  const auto basis = monomials_of_degree(n, degree);
  std::map<std::vector<int>, int> column_of;
  for (std::size_t c = 0; c < basis.size(); ++c) column_of[basis[c]] = static_cast<int>(c);
  const int cols = static_cast<int>(basis.size());
  const int words = (cols + 63) / 64;

  std::vector<std::vector<std::uint64_t>> rows;
  for (int k = 1; k <= n && k <= degree; ++k) {
    const auto subsets = subsets_of_size(n, k);
    for (const auto& mono : monomials_of_degree(n, degree - k)) {
      std::vector<std::uint64_t> row(words, 0);
      for (const auto& subset : subsets) {
        std::vector<int> exps = mono;
        for (int i : subset) ++exps[i];
        const int c = column_of.at(exps);
        row[c / 64] ^= (1ull << (c % 64));
      }
      rows.push_back(std::move(row));
    }
  }

  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c / 64] & (1ull << (c % 64))) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r != rank && (rows[r][c / 64] & (1ull << (c % 64)))) {
        for (int w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  return cols - rank;
}

// ---------------------------------------------------------------------------
// Random frames, rotations, and signed permutations.

inline Frame well_conditioned_frame(int n, NormalSampler& rng,
                                    double det_floor = 0.25) {
  for (;;) {
    Matrix cols(n, n);
    for (int j = 0; j < n; ++j) cols.col(j) = rng.unit_vector(n);
    const double det = cols.determinant();
    if (std::abs(det) < det_floor) continue;
    if (det < 0.0) cols.col(n - 1) = -cols.col(n - 1);
    return Frame(cols);
  }
}

// Positive-determinant representative of a frame's sign-change orbit.
inline Frame oriented(const Frame& frame) {
  if (frame.det() > 0.0) return frame;
  Matrix cols = frame.cols();
  cols.col(0) = -cols.col(0);
  return Frame(cols);
}

inline Matrix random_rotation(int n, NormalSampler& rng) {
  Matrix gauss(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gauss(i, j) = rng();
  }
  Eigen::HouseholderQR<Matrix> qr(gauss);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

// Signed permutation acting on columns from the right; det +1 when
// orientation_preserving.
inline Matrix random_signed_permutation(int n, NormalSampler& rng,
                                        bool orientation_preserving) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform() * (i + 1)) % (i + 1);
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> sign(n);
  for (int i = 0; i < n; ++i) sign[i] = rng.uniform() < 0.5 ? -1 : 1;
  Matrix p = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) p(perm[j], j) = sign[j];
  if (orientation_preserving && p.determinant() < 0.0) p.col(0) = -p.col(0);
  return p;
}

// ---------------------------------------------------------------------------
// Finite differences of the objective along tangent directions.

inline double directional_fd(const Body& body, const Frame& frame,
                             const TangentVector& direction, double step = 1e-6) {
  const Matrix& t = direction.components();
  const double forward =
      objective_f(body, retract(frame, TangentVector(step * t)));
  const double backward =
      objective_f(body, retract(frame, TangentVector(-step * t)));
  return (forward - backward) / (2.0 * step);
}

inline TangentVector random_tangent(const Frame& frame, NormalSampler& rng) {
  const int n = frame.dim();
  Matrix ambient(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ambient(i, j) = rng();
  }
  Matrix t = project_tangent(frame, ambient).components();
  return TangentVector(t / t.norm());
}

// ---------------------------------------------------------------------------
// Exhaustive critical-orbit count for n = 2 on the (phi, theta) chart
//   v1 = (cos phi, sin phi), v2 = (cos(phi+theta), sin(phi+theta)),
// phi in [0, 2pi), theta in (0, pi). Cells where both chart partials change
// sign are polished by Newton on the finite-difference gradient, and the
// refined points are counted modulo sign changes and permutations.

inline Frame frame_from_angles(double phi, double theta) {
  Matrix cols(2, 2);
  cols << std::cos(phi), std::cos(phi + theta), std::sin(phi), std::sin(phi + theta);
  return Frame(cols);
}

inline int count_critical_orbits_n2(const Body& body, int grid,
                                    std::vector<Frame>* representatives = nullptr) {
  const double two_pi = 2.0 * M_PI;
  const double d_phi = two_pi / grid;
  const double d_theta = M_PI / (grid + 1);

  auto f_at = [&](double phi, double theta) {
    return objective_f(body, frame_from_angles(phi, theta));
  };

  // Grid of f values; theta strictly inside (0, pi).
  std::vector<std::vector<double>> f(grid, std::vector<double>(grid + 1));
  for (int i = 0; i < grid; ++i) {
    for (int j = 1; j <= grid; ++j) f[i][j - 1] = f_at(i * d_phi, j * d_theta);
  }
  auto fval = [&](int i, int j) { return f[(i % grid + grid) % grid][j - 1]; };
  auto fphi = [&](int i, int j) {
    return (fval(i + 1, j) - fval(i - 1, j)) / (2.0 * d_phi);
  };
  auto ftheta = [&](int i, int j) {
    return (fval(i, j + 1) - fval(i, j - 1)) / (2.0 * d_theta);
  };

  auto newton_polish = [&](double phi, double theta, bool& ok) {
    const double h = 1e-6;
    for (int iter = 0; iter < 60; ++iter) {
      auto grad = [&](double p, double t) {
        Eigen::Vector2d g;
        g[0] = (f_at(p + h, t) - f_at(p - h, t)) / (2.0 * h);
        g[1] = (f_at(p, t + h) - f_at(p, t - h)) / (2.0 * h);
        return g;
      };
      const Eigen::Vector2d g = grad(phi, theta);
      if (g.norm() < 1e-9) {
        ok = true;
        return std::make_pair(phi, theta);
      }
      Eigen::Matrix2d jac;
      const double h2 = 1e-5;
      const Eigen::Vector2d gp = grad(phi + h2, theta);
      const Eigen::Vector2d gm = grad(phi - h2, theta);
      const Eigen::Vector2d tp = grad(phi, theta + h2);
      const Eigen::Vector2d tm = grad(phi, theta - h2);
      jac.col(0) = (gp - gm) / (2.0 * h2);
      jac.col(1) = (tp - tm) / (2.0 * h2);
      const Eigen::Vector2d step = jac.fullPivLu().solve(-g);
      phi += step[0];
      theta += step[1];
      if (!(theta > 1e-3) || !(theta < M_PI - 1e-3)) break;
    }
    ok = false;
    return std::make_pair(phi, theta);
  };

  std::vector<Matrix> orbit_reps;
  for (int i = 0; i < grid; ++i) {
    for (int j = 2; j < grid - 1; ++j) {
      double lo_p = 1e300, hi_p = -1e300, lo_t = 1e300, hi_t = -1e300;
      for (int di = 0; di <= 1; ++di) {
        for (int dj = 0; dj <= 1; ++dj) {
          const double p = fphi(i + di, j + dj);
          const double t = ftheta(i + di, j + dj);
          lo_p = std::min(lo_p, p);
          hi_p = std::max(hi_p, p);
          lo_t = std::min(lo_t, t);
          hi_t = std::max(hi_t, t);
        }
      }
      if (!(lo_p < 0.0 && hi_p > 0.0 && lo_t < 0.0 && hi_t > 0.0)) continue;
      bool ok = false;
      const auto [phi, theta] =
          newton_polish((i + 0.5) * d_phi, (j + 1.5) * d_theta, ok);
      if (!ok) continue;
      const Frame canon = canonicalize(frame_from_angles(phi, theta));
      bool known = false;
      for (const Matrix& rep : orbit_reps) {
        if ((rep - canon.cols()).cwiseAbs().maxCoeff() < 1e-6) {
          known = true;
          break;
        }
      }
      if (!known) {
        orbit_reps.push_back(canon.cols());
        if (representatives != nullptr) representatives->push_back(canon);
      }
    }
  }
  return static_cast<int>(orbit_reps.size());
}

}  // namespace auerbach::testing
