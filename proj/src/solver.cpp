#include "auerbach/solver.hpp"

#include "auerbach/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>

namespace auerbach {

namespace {

constexpr double kSignTieTol = 1e-9;
constexpr double kSortQuantum = 1e-7;

std::vector<long long> rounded_column(const Vector& v) {
  std::vector<long long> r(v.size());
  for (int i = 0; i < v.size(); ++i) {
    r[i] = std::llround(v[i] / kSortQuantum);
  }
  return r;
}

}  // namespace

void SearchConfig::validate() const {
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  if (!(crit_tol > 0.0) || !(dedup_tol > 0.0) || !(det_floor > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

Frame random_frame(int n, NormalSampler& rng, double det_floor) {
  if (n < 2) throw std::invalid_argument("frame dimension must be >= 2");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix cols(n, n);
    for (int j = 0; j < n; ++j) cols.col(j) = rng.unit_vector(n);
    const double det = cols.determinant();
    if (std::abs(det) < det_floor) continue;
    if (det < 0.0) cols.col(n - 1) = -cols.col(n - 1);
    return Frame(cols);
  }
  throw NumericError(
      "rejected 1000 consecutive random frames; det_floor is too high");
}

RefineOutcome refine_to_critical(const Body& body, const Frame& start,
                                 const SearchConfig& config) {
  config.validate();
  if (!body.smooth()) {
    throw std::invalid_argument("critical-point refinement needs a smooth body");
  }
  const BasisVolumeObjective objective(body);
  RefineSettings settings;
  settings.crit_tol = config.crit_tol;
  settings.max_iters = config.max_iters;
  const RefineResult r = refine_critical_point(objective, start.cols(), settings);
  if (!r.converged) {
    return Divergence{r.cols, r.grad_norm, r.iterations, r.failure};
  }
  const MorseData morse = classify_morse(objective, r.cols);
  Frame frame(normalize_columns(r.cols));
  const double grad_norm = grad_f(body, frame).norm();  // fresh evaluation
  if (!(grad_norm < config.crit_tol)) {
    return Divergence{r.cols, grad_norm, r.iterations,
                      "re-evaluated gradient exceeds crit_tol"};
  }
  CriticalPoint point{std::move(frame), objective.value(r.cols) + 0.0,
                      grad_norm,        morse.eigenvalues,
                      morse.index,      morse.nullity,
                      morse.degenerate, r.iterations};
  return point;
}

Frame canonicalize(const Frame& frame) {
  const int n = frame.dim();
  Matrix cols = frame.cols();
  for (int j = 0; j < n; ++j) {
    const double amax = cols.col(j).cwiseAbs().maxCoeff();
    int pivot = 0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(cols(i, j)) >= amax - kSignTieTol) {
        pivot = i;
        break;
      }
    }
    if (cols(pivot, j) < 0.0) cols.col(j) = -cols.col(j);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<long long>> keys(n);
  for (int j = 0; j < n; ++j) keys[j] = rounded_column(cols.col(j));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[a] > keys[b]; });
  Matrix sorted(n, n);
  for (int j = 0; j < n; ++j) sorted.col(j) = cols.col(order[j]);
  return Frame(sorted);
}

void parallel_for_index(int count, const std::function<void(int)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::max(1, std::min<int>(count, static_cast<int>(hw == 0 ? 2 : hw)));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

BasisSearchReport find_basis_classes(const Body& body, const SearchConfig& config) {
  config.validate();
  if (!body.smooth() || !body.symmetric()) {
    throw std::invalid_argument(
        "basis search needs a smooth centrally symmetric body");
  }
  const int n = body.dim();

  std::vector<std::optional<RefineOutcome>> outcomes(config.starts);
  parallel_for_index(config.starts, [&](int k) {
    try {
      NormalSampler rng(config.seed + static_cast<std::uint64_t>(k));
      const Frame start = random_frame(n, rng, config.det_floor);
      outcomes[k] = refine_to_critical(body, start, config);
    } catch (const std::exception& e) {
      outcomes[k] = Divergence{Matrix::Zero(n, n), 0.0, 0,
                               std::string("error: ") + e.what()};
    }
  });

  BasisSearchReport report;
  report.config = config;
  report.starts.reserve(config.starts);

  // Single-linkage clustering of canonical frames at dedup_tol.
  std::vector<Matrix> canon;
  std::vector<int> canon_start;
  std::vector<const CriticalPoint*> points;
  for (int k = 0; k < config.starts; ++k) {
    if (const auto* cp = std::get_if<CriticalPoint>(&*outcomes[k])) {
      canon.push_back(canonicalize(cp->frame).cols());
      canon_start.push_back(k);
      points.push_back(cp);
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
      if ((canon[a] - canon[b]).cwiseAbs().maxCoeff() < config.dedup_tol) {
        const int ra = root(a), rb = root(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::map<int, int> class_of_root;  // root (ordered by first member) -> id
  std::vector<int> class_of_point(found, -1);
  for (int a = 0; a < found; ++a) {
    const int r = root(a);
    auto [it, inserted] =
        class_of_root.try_emplace(r, static_cast<int>(class_of_root.size()));
    class_of_point[a] = it->second;
  }

  std::vector<BasisClass> classes;
  classes.resize(class_of_root.size(), BasisClass{Frame::identity(n), 0, 0, 0.0,
                                                  0.0, Vector(), 0, 0, false,
                                                  AuerbachReport{}});
  std::vector<bool> seeded(class_of_root.size(), false);
  for (int a = 0; a < found; ++a) {
    const int id = class_of_point[a];
    BasisClass& cls = classes[id];
    if (!seeded[id]) {
      const CriticalPoint& cp = *points[a];
      cls.canonical = Frame(canon[a]);
      cls.first_start = canon_start[a];
      cls.f_value = cp.f_value;
      cls.grad_norm = cp.grad_norm;
      cls.hessian_eigs = cp.hessian_eigs;
      cls.index = cp.index;
      cls.nullity = cp.nullity;
      cls.degenerate = cp.degenerate;
      seeded[id] = true;
    }
    ++cls.members_found;
  }
  for (BasisClass& cls : classes) {
    cls.verification = verify_auerbach(body, cls.canonical, 100.0 * config.crit_tol);
  }
  report.classes = std::move(classes);

  int converged_seen = 0;
  for (int k = 0; k < config.starts; ++k) {
    StartOutcome outcome;
    outcome.index = k;
    if (const auto* cp = std::get_if<CriticalPoint>(&*outcomes[k])) {
      outcome.converged = true;
      outcome.iterations = cp->iterations;
      outcome.class_id = class_of_point[converged_seen++];
    } else {
      const Divergence& div = std::get<Divergence>(*outcomes[k]);
      outcome.converged = false;
      outcome.iterations = div.iterations;
      outcome.failure = div.reason;
      ++report.diverged;
    }
    report.starts.push_back(std::move(outcome));
  }
  return report;
}

MorseCheckReport morse_inequality_check(const std::vector<BasisClass>& classes,
                                        int n) {
  MorseCheckReport report;
  int degenerate = 0;
  long long nondegenerate = 0;
  for (const BasisClass& cls : classes) {
    if (cls.degenerate) {
      ++degenerate;
    } else {
      ++nondegenerate;
      ++report.index_histogram[cls.index];
    }
  }
  report.conclusive = (degenerate == 0);
  report.constraints.push_back({"total_nondegenerate_classes",
                                morse_lower_bound_real(n), nondegenerate,
                                nondegenerate >= morse_lower_bound_real(n)});
  if (n >= 3) {
    const long long idx1 = report.index_histogram.count(1)
                               ? report.index_histogram.at(1)
                               : 0;
    const long long idx2 = report.index_histogram.count(2)
                               ? report.index_histogram.at(2)
                               : 0;
    report.constraints.push_back({"classes_of_index_1", 2, idx1, idx1 >= 2});
    report.constraints.push_back({"classes_of_index_2", 2, idx2, idx2 >= 2});
  }
  bool all = true;
  for (const auto& c : report.constraints) all = all && c.passed;
  report.passed = report.conclusive && all;
  if (!report.conclusive) {
    report.note = std::to_string(degenerate) +
                  " degenerate class(es) present; Morse counting is "
                  "inconclusive";
  }
  return report;
}

}  // namespace auerbach
