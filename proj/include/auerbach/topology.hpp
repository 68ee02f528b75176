#pragma once

// Closed-form lower bounds on the number of critical basis/simplex
// configurations: mod-2 Poincare series of the real flag manifold,
// rational cohomology dimension of SO(n), cup-length driven
// Lusternik-Schnirelmann bounds, and the Morse-count bounds they imply.

#include <string>
#include <vector>

namespace auerbach {

// Largest n for which n! (and hence every table entry) fits in long long.
inline constexpr int kMaxBoundsDim = 20;

long long factorial(int n);

// Coefficients of prod_{i=1..n} (1 + q + ... + q^{i-1}); coeffs[k] is the
// dimension of the degree-k graded piece of Z2[x_1..x_n]/(sym_1..sym_n).
// Evaluates to n! at q = 1; degree n(n-1)/2.
std::vector<long long> flag_poincare_z2(int n);

// dim H^*(SO(n); Q) = 2^floor(n/2).
long long so_rational_dim(int n);

// Category bound for bases: n(n-1)/2 + 1.
long long ls_lower_bound(int n);

// Morse bound for bases, real case: 2^floor(n/2) + 4 for n >= 3 (the +4
// comes from the fundamental-group constraints on index-1/2 points),
// 2^floor(n/2) for n = 2.
long long morse_lower_bound_real(int n);

// Morse bound, complex case: n! + 2.
long long morse_lower_bound_complex(int n);

// Z2 cup-length of SO(n):
//   theta(n) = sum over i >= 0 with 2i+1 < n of (p(n,i) - 1),
//   p(n,i) = smallest power of two with 2^k (2i+1) >= n.
long long theta(int n);

struct SimplexBounds {
  long long ls = 0;     // theta(n)
  long long morse = 0;  // 2^floor(n/2) + 4
  bool small_n_caveat = false;
};

SimplexBounds simplex_bounds(int n);

struct BoundsReport {
  int n = 0;
  long long ls_bound_bases = 0;
  long long morse_bound_real = 0;
  long long morse_bound_complex = 0;
  long long flag_z2_dim = 0;
  long long so_rational_dim = 0;
  long long theta = 0;
  long long simplex_ls_bound = 0;
  long long simplex_morse_bound = 0;
  bool small_n_caveat = false;
};

BoundsReport bounds_report(int n);
std::vector<BoundsReport> summary_table(int n_min, int n_max);

// Footnotes attached to every rendered table.
std::vector<std::string> bounds_notes();

}  // namespace auerbach
