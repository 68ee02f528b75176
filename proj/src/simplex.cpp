#include "auerbach/simplex.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace auerbach {

namespace {

constexpr double kSortQuantum = 1e-7;

Matrix boundary_vertices(const Body& body, const Matrix& directions) {
  Matrix vertices = directions;
  for (int j = 0; j < directions.cols(); ++j) {
    vertices.col(j) *= body.radial(directions.col(j));
  }
  return vertices;
}

Matrix edge_matrix(const Matrix& vertices) {
  const int n = static_cast<int>(vertices.rows());
  Matrix edges(n, n);
  for (int i = 1; i <= n; ++i) edges.col(i - 1) = vertices.col(i) - vertices.col(0);
  return edges;
}

void check_directions(const Body& body, const Matrix& directions) {
  if (directions.rows() != body.dim() || directions.cols() != body.dim() + 1) {
    throw std::invalid_argument("simplex needs n+1 unit directions in R^n");
  }
  for (int j = 0; j < directions.cols(); ++j) {
    if (std::abs(directions.col(j).norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("simplex direction " + std::to_string(j) +
                                  " is not a unit vector");
    }
  }
}

Matrix random_simplex_directions(int n, NormalSampler& rng, const Body& body,
                                 double det_floor) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix directions(n, n + 1);
    for (int j = 0; j <= n; ++j) directions.col(j) = rng.unit_vector(n);
    const Matrix vertices = boundary_vertices(body, directions);
    if (std::abs(edge_matrix(vertices).determinant()) >= det_floor) {
      return directions;
    }
  }
  throw NumericError(
      "rejected 1000 consecutive random simplices; det_floor is too high");
}

}  // namespace

double simplex_volume(const Body& body, const Matrix& directions) {
  check_directions(body, directions);
  const Matrix vertices = boundary_vertices(body, directions);
  return edge_matrix(vertices).determinant() /
         static_cast<double>(factorial(body.dim()));
}

SimplexCandidate make_simplex_candidate(const Body& body, const Matrix& directions) {
  check_directions(body, directions);
  SimplexCandidate c;
  c.directions = directions;
  c.vertices = boundary_vertices(body, directions);
  c.volume = edge_matrix(c.vertices).determinant() /
             static_cast<double>(factorial(body.dim()));
  const SimplexVolumeObjective objective(body);
  if (c.volume != 0.0 && body.smooth()) {
    c.grad_norm = riemannian_gradient_norm(objective, directions);
    if (c.grad_norm < kHessianGradGate) {
      const MorseData morse = classify_morse(objective, directions);
      c.hessian_eigs = morse.eigenvalues;
      c.index = morse.index;
      c.nullity = morse.nullity;
      c.degenerate = morse.degenerate;
      c.morse_computed = true;
    }
  }
  return c;
}

SimplexCandidate canonicalize_simplex(const SimplexCandidate& c) {
  const int m = static_cast<int>(c.vertices.cols());
  std::vector<std::vector<long long>> keys(m);
  for (int j = 0; j < m; ++j) {
    keys[j].resize(c.vertices.rows());
    for (int i = 0; i < c.vertices.rows(); ++i) {
      keys[j][i] = std::llround(c.vertices(i, j) / kSortQuantum);
    }
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] > keys[b]; });
  SimplexCandidate out = c;
  for (int j = 0; j < m; ++j) {
    out.directions.col(j) = c.directions.col(order[j]);
    out.vertices.col(j) = c.vertices.col(order[j]);
  }
  out.volume = edge_matrix(out.vertices).determinant() /
               static_cast<double>(factorial(static_cast<int>(c.vertices.rows())));
  return out;
}

SimplexVerification verify_simplex(const Body& body, const SimplexCandidate& c,
                                   double tol) {
  const int n = body.dim();
  if (c.directions.cols() != n + 1) {
    throw std::invalid_argument("candidate has the wrong number of vertices");
  }
  if (std::abs(c.volume) < 1e-12) {
    throw std::invalid_argument("degenerate simplex cannot be verified");
  }
  SimplexVerification report;
  report.vertices.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    // Functional vanishing on differences of the opposite-face vertices,
    // equal to 1 at vertex i relative to the face.
    const int anchor = i == 0 ? 1 : 0;
    Matrix system(n, n);
    Vector rhs = Vector::Zero(n);
    int row = 0;
    for (int j = 0; j <= n; ++j) {
      if (j == i || j == anchor) continue;
      system.row(row++) = (c.vertices.col(j) - c.vertices.col(anchor)).transpose();
    }
    system.row(row) = (c.vertices.col(i) - c.vertices.col(anchor)).transpose();
    rhs[row] = 1.0;
    Eigen::PartialPivLU<Matrix> lu(system);
    const double det = lu.determinant();
    if (det == 0.0 || !std::isfinite(det)) {
      throw std::invalid_argument("degenerate simplex cannot be verified");
    }
    const Vector phi = lu.solve(rhs);
    const double level = phi.dot(c.vertices.col(i));
    const double support = body.support_value(phi).value;
    report.vertices[i].slack = support - level;
    report.vertices[i].passed = report.vertices[i].slack <= tol;
  }
  report.max_slack = 0.0;
  report.passed = true;
  for (const auto& v : report.vertices) {
    report.max_slack = std::max(report.max_slack, v.slack);
    report.passed = report.passed && v.passed;
  }
  return report;
}

SimplexSearchReport find_auerbach_simplices(const Body& body,
                                            const SearchConfig& config) {
  config.validate();
  if (!body.smooth()) {
    throw std::invalid_argument("simplex search needs a smooth body");
  }
  const int n = body.dim();
  const SimplexVolumeObjective objective(body);

  struct StartResult {
    std::optional<SimplexCandidate> candidate;
    int iterations = 0;
    double grad_norm = 0.0;
    std::string failure;
  };
  std::vector<StartResult> results(config.starts);
  parallel_for_index(config.starts, [&](int k) {
    StartResult& slot = results[k];
    try {
      NormalSampler rng(config.seed + static_cast<std::uint64_t>(k));
      const Matrix start = random_simplex_directions(n, rng, body, config.det_floor);
      RefineSettings settings;
      settings.crit_tol = config.crit_tol;
      settings.max_iters = config.max_iters;
      const RefineResult r = refine_critical_point(objective, start, settings);
      slot.iterations = r.iterations;
      slot.grad_norm = r.grad_norm;
      if (r.converged) {
        slot.candidate = make_simplex_candidate(body, normalize_columns(r.cols));
      } else {
        slot.failure = r.failure;
      }
    } catch (const std::exception& e) {
      slot.failure = std::string("error: ") + e.what();
    }
  });

  SimplexSearchReport report;
  report.config = config;
  report.bounds = simplex_bounds(n);

  std::vector<SimplexCandidate> canon;
  std::vector<int> canon_start;
  for (int k = 0; k < config.starts; ++k) {
    if (results[k].candidate.has_value()) {
      canon.push_back(canonicalize_simplex(*results[k].candidate));
      canon_start.push_back(k);
    }
  }
  const int found = static_cast<int>(canon.size());
  std::vector<int> parent(found);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < found; ++a) {
    for (int b = a + 1; b < found; ++b) {
      if ((canon[a].vertices - canon[b].vertices).cwiseAbs().maxCoeff() <
          config.dedup_tol) {
        const int ra = root(a), rb = root(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::vector<int> class_of_point(found, -1);
  int next_id = 0;
  std::map<int, int> ids;
  for (int a = 0; a < found; ++a) {
    const int r = root(a);
    auto [it, inserted] = ids.try_emplace(r, next_id);
    if (inserted) ++next_id;
    class_of_point[a] = it->second;
  }

  report.classes.resize(next_id);
  std::vector<bool> seeded(next_id, false);
  for (int a = 0; a < found; ++a) {
    SimplexClass& cls = report.classes[class_of_point[a]];
    if (!seeded[class_of_point[a]]) {
      cls.candidate = canon[a];
      cls.first_start = canon_start[a];
      seeded[class_of_point[a]] = true;
    }
    ++cls.members_found;
  }
  for (SimplexClass& cls : report.classes) {
    cls.verification = verify_simplex(body, cls.candidate, 100.0 * config.crit_tol);
  }

  int converged_seen = 0;
  for (int k = 0; k < config.starts; ++k) {
    StartOutcome outcome;
    outcome.index = k;
    outcome.iterations = results[k].iterations;
    if (results[k].candidate.has_value()) {
      outcome.converged = true;
      outcome.class_id = class_of_point[converged_seen++];
    } else {
      outcome.failure = results[k].failure;
      ++report.diverged;
    }
    report.starts.push_back(std::move(outcome));
  }

  int last_new_class_start = 0;
  for (const SimplexClass& cls : report.classes) {
    last_new_class_start = std::max(last_new_class_start, cls.first_start);
  }
  report.stabilized =
      !report.classes.empty() && last_new_class_start < config.starts / 2;
  report.meets_ls_bound =
      static_cast<long long>(report.classes.size()) >= report.bounds.ls;
  return report;
}

}  // namespace auerbach
