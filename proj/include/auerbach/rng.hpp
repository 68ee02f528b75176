#pragma once

#include "auerbach/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace auerbach {

// Standard-normal draws from mt19937_64 via Box-Muller on explicit
// uniforms, so a given seed yields the same stream on every platform.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() {  // (0, 1]
    return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
  }

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }

  Vector unit_vector(int n) {
    for (;;) {
      Vector v = gaussian_vector(n);
      const double norm = v.norm();
      if (norm > 1e-8) return v / norm;
    }
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace auerbach
