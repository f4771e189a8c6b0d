#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kronsample/linalg.hpp"

namespace kronsample {

// Deterministic random source. mt19937_64 has a standard-pinned sequence
// and all mappings below are written out, so a seed fixes every stream
// byte-for-byte across platforms and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in (0, 1), 53-bit resolution, never exactly 0.
  double uniform() {
    while (true) {
      const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circular complex normal with unit variance: E|z|^2 = 1.
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re * 0.70710678118654752440, im * 0.70710678118654752440);
  }

  // Unbiased integer in [0, n); rejection sampling on the top bits.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    while (true) {
      const std::uint64_t x = eng_();
      if (x < limit) return x % n;
    }
  }

  Matrix gaussian_matrix(Index rows, Index cols, bool complex_entries) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        m(i, j) = complex_entries ? cnormal() : Complex(normal(), 0.0);
      }
    }
    return m;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kronsample
