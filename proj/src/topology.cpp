#include "auerbach/topology.hpp"

#include <stdexcept>

namespace auerbach {

namespace {

void check_dim(int n, int n_min = 2, int n_max = kMaxBoundsDim) {
  if (n < n_min || n > n_max) {
    throw std::invalid_argument("bounds are implemented for " +
                                std::to_string(n_min) + " <= n <= " +
                                std::to_string(n_max) + ", got n = " +
                                std::to_string(n));
  }
}

// 2^floor(n/2) stays in long long up to here.
constexpr int kMaxPowerDim = 124;

}  // namespace

long long factorial(int n) {
  check_dim(n, 0);
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<long long> flag_poincare_z2(int n) {
  check_dim(n, 1);
  // Multiply out the q-factorial one bracket [i]_q = 1 + q + ... + q^{i-1}
  // at a time.
  std::vector<long long> coeffs{1};
  for (int i = 2; i <= n; ++i) {
    std::vector<long long> next(coeffs.size() + i - 1, 0);
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      for (int k = 0; k < i; ++k) next[d + k] += coeffs[d];
    }
    coeffs.swap(next);
  }
  return coeffs;
}

long long so_rational_dim(int n) {
  check_dim(n, 2, kMaxPowerDim);
  return 1LL << (n / 2);
}

long long ls_lower_bound(int n) {
  check_dim(n, 2, 1 << 20);
  return static_cast<long long>(n) * (n - 1) / 2 + 1;
}

long long morse_lower_bound_real(int n) {
  check_dim(n, 2, kMaxPowerDim);
  return n >= 3 ? so_rational_dim(n) + 4 : so_rational_dim(n);
}

long long morse_lower_bound_complex(int n) {
  check_dim(n);
  return factorial(n) + 2;
}

long long theta(int n) {
  check_dim(n, 2, 1 << 20);
  long long sum = 0;
  for (int i = 0; 2 * i + 1 < n; ++i) {
    long long odd = 2 * i + 1;
    long long p = 1;
    while (p * odd < n) p *= 2;
    sum += p - 1;
  }
  return sum;
}

SimplexBounds simplex_bounds(int n) {
  check_dim(n, 2, kMaxPowerDim);
  SimplexBounds b;
  b.ls = theta(n);
  b.morse = so_rational_dim(n) + 4;
  b.small_n_caveat = n < 3;
  return b;
}

BoundsReport bounds_report(int n) {
  check_dim(n);
  BoundsReport r;
  r.n = n;
  r.ls_bound_bases = ls_lower_bound(n);
  r.morse_bound_real = morse_lower_bound_real(n);
  r.morse_bound_complex = morse_lower_bound_complex(n);
  r.flag_z2_dim = factorial(n);
  r.so_rational_dim = so_rational_dim(n);
  r.theta = theta(n);
  const SimplexBounds s = simplex_bounds(n);
  r.simplex_ls_bound = s.ls;
  r.simplex_morse_bound = s.morse;
  r.small_n_caveat = s.small_n_caveat;
  return r;
}

std::vector<BoundsReport> summary_table(int n_min, int n_max) {
  if (n_min > n_max) throw std::invalid_argument("empty bounds range");
  check_dim(n_min);
  check_dim(n_max);
  std::vector<BoundsReport> rows;
  rows.reserve(n_max - n_min + 1);
  for (int n = n_min; n <= n_max; ++n) rows.push_back(bounds_report(n));
  return rows;
}

std::vector<std::string> bounds_notes() {
  return {
      "simplex_morse includes the +4 fundamental-group correction, which is "
      "derived for the basis case; the conservative simplex count is "
      "2^floor(n/2)",
      "rows with small_n_caveat=1 (n=2) extrapolate simplex formulas stated "
      "for n>=3",
  };
}

}  // namespace auerbach
