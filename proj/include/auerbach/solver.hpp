#pragma once

// Multistart critical-point search for the basis objective, canonical forms
// modulo sign changes and column permutations, deduplication into basis
// classes, Auerbach verification of every class, and the Morse-count checks.

#include "auerbach/critical_search.hpp"
#include "auerbach/manifold.hpp"
#include "auerbach/rng.hpp"
#include "auerbach/verify.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace auerbach {

struct SearchConfig {
  int starts = 100;
  std::uint64_t seed = 0;
  double crit_tol = 1e-9;    // threshold on the Riemannian gradient norm
  double dedup_tol = 1e-6;   // max-norm distance between canonical frames
  int max_iters = 2000;
  double det_floor = 1e-3;   // minimum |det| for accepted random starts
  void validate() const;
};

// Uniform unit columns (normalized Gaussians), resampled until
// |det| >= det_floor, orientation fixed to det > 0 by flipping the last
// column. Throws after 1000 consecutive rejections.
Frame random_frame(int n, NormalSampler& rng, double det_floor = 1e-3);

struct CriticalPoint {
  Frame frame;
  double f_value = 0.0;
  double grad_norm = 0.0;  // re-evaluated at the returned frame
  Vector hessian_eigs;     // ascending
  int index = 0;
  int nullity = 0;
  bool degenerate = false;
  int iterations = 0;
};

struct Divergence {
  Matrix last_cols;
  double grad_norm = 0.0;
  int iterations = 0;
  std::string reason;
};

using RefineOutcome = std::variant<CriticalPoint, Divergence>;

RefineOutcome refine_to_critical(const Body& body, const Frame& start,
                                 const SearchConfig& config);

// Canonical representative of the orbit under sign changes and column
// permutations: each column is flipped so its largest-magnitude entry
// (smallest index on ties within 1e-9) is positive, then columns are sorted
// in descending lexicographic order of their coordinates rounded to 1e-7.
// Orientation is deliberately not preserved.
Frame canonicalize(const Frame& frame);

struct StartOutcome {
  int index = 0;
  bool converged = false;
  int iterations = 0;
  int class_id = -1;       // -1 for divergences
  std::string failure;
};

struct BasisClass {
  Frame canonical;
  int members_found = 0;
  int first_start = 0;
  double f_value = 0.0;
  double grad_norm = 0.0;
  Vector hessian_eigs;
  int index = 0;
  int nullity = 0;
  bool degenerate = false;
  AuerbachReport verification;
};

struct BasisSearchReport {
  SearchConfig config;
  std::vector<BasisClass> classes;
  std::vector<StartOutcome> starts;
  int diverged = 0;
};

// Deterministic for fixed (body, config): per-start streams are seeded
// seed + k and the reduction runs in start order, also under parallel
// execution. Converged points are clustered by single linkage at dedup_tol
// on canonical frames; every class is verified at 100 * crit_tol and kept
// (flagged) even when verification fails.
BasisSearchReport find_basis_classes(const Body& body, const SearchConfig& config);

struct MorseCheckConstraint {
  std::string name;
  long long required = 0;
  long long observed = 0;
  bool passed = false;
};

struct MorseCheckReport {
  bool conclusive = false;  // false when any class is degenerate
  bool passed = false;      // conclusive and all constraints met
  std::vector<MorseCheckConstraint> constraints;
  std::map<int, int> index_histogram;
  std::string note;
};

// Nondegenerate class count against the real Morse bound, plus the
// two-points-of-index-1 and two-points-of-index-2 constraints for n >= 3.
MorseCheckReport morse_inequality_check(const std::vector<BasisClass>& classes,
                                        int n);

// Runs fn(0..count-1) on a small thread pool; results must be written to
// preallocated slots so ordering stays deterministic.
void parallel_for_index(int count, const std::function<void(int)>& fn);

}  // namespace auerbach
