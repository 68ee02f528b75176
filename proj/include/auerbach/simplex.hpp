#pragma once

// Inscribed-simplex pipeline: critical points of the volume of a simplex
// with vertices on the boundary of a (not necessarily symmetric) star body,
// searched over n+1 unit directions, deduplicated modulo vertex
// permutations, and verified through supporting hyperplanes parallel to
// opposite faces.

#include "auerbach/bodies.hpp"
#include "auerbach/critical_search.hpp"
#include "auerbach/solver.hpp"
#include "auerbach/topology.hpp"

#include <vector>

namespace auerbach {

struct SimplexCandidate {
  Matrix directions;  // n x (n+1), unit columns u_0..u_n
  Matrix vertices;    // boundary points h(u_i) u_i
  double volume = 0.0;     // signed: det(b_1-b_0,...,b_n-b_0) / n!
  double grad_norm = 0.0;  // of -log|volume| on the sphere product
  Vector hessian_eigs;
  int index = 0;
  int nullity = 0;
  bool degenerate = false;
  bool morse_computed = false;  // Morse data needs a near-critical candidate
};

double simplex_volume(const Body& body, const Matrix& directions);

SimplexCandidate make_simplex_candidate(const Body& body, const Matrix& directions);

// Vertex permutation sorting vertices in descending lexicographic order of
// their 1e-7-rounded coordinates; orientation is deliberately forgotten.
SimplexCandidate canonicalize_simplex(const SimplexCandidate& c);

struct VertexSupportReport {
  double slack = 0.0;  // support value minus the hyperplane level; >= 0
  bool passed = false;
};

struct SimplexVerification {
  std::vector<VertexSupportReport> vertices;
  double max_slack = 0.0;
  bool passed = false;
};

// For every vertex, builds the functional constant on the opposite face and
// normalized to 1 at the vertex, then checks that the hyperplane through the
// vertex supports the body within tol.
SimplexVerification verify_simplex(const Body& body, const SimplexCandidate& c,
                                   double tol);

struct SimplexClass {
  SimplexCandidate candidate;  // canonical representative
  int members_found = 0;
  int first_start = 0;
  SimplexVerification verification;
};

struct SimplexSearchReport {
  SearchConfig config;
  std::vector<SimplexClass> classes;
  std::vector<StartOutcome> starts;
  int diverged = 0;
  bool stabilized = false;  // no new class appeared in the last half of starts
  SimplexBounds bounds;     // informational comparison target
  bool meets_ls_bound = false;
};

SimplexSearchReport find_auerbach_simplices(const Body& body,
                                            const SearchConfig& config);

}  // namespace auerbach
