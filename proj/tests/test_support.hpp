#pragma once

// Shared fixtures for the test binaries: seeded random coefficients and a
// few brute-force oracles that stay independent of the library code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "sphwiener/harmonic.hpp"

namespace sphwiener::testing {

inline HarmonicCoeffs random_coeffs(int bandlimit, std::uint64_t seed, bool real_field = false) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HarmonicCoeffs out(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    for (int m = -l; m <= l; ++m) out(l, m) = {normal(gen), normal(gen)};
  }
  if (real_field) {
    for (int l = 0; l < bandlimit; ++l) {
      out(l, 0) = out(l, 0).real();
      for (int m = 1; m <= l; ++m) {
        out(l, -m) = ((m % 2 == 0) ? 1.0 : -1.0) * std::conj(out(l, m));
      }
    }
    out.set_real_field(true);
  }
  return out;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Wigner's explicit sum for d^j_{a,b}(beta) (row index a, column b);
/// accurate for small j only.
inline double wigner_d_factorial(int j, int a, int b, double beta) {
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const double pre =
      std::sqrt(factorial(j + a) * factorial(j - a) * factorial(j + b) * factorial(j - b));
  double sum = 0.0;
  for (int k = 0; k <= 2 * j; ++k) {
    if (j + b - k < 0 || a - b + k < 0 || j - a - k < 0) continue;
    const double sign = ((a - b + k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign / (factorial(j + b - k) * factorial(k) * factorial(a - b + k) *
                   factorial(j - a - k)) *
           std::pow(c, 2 * j + b - a - 2 * k) * std::pow(s, a - b + 2 * k);
  }
  return pre * sum;
}

}  // namespace sphwiener::testing
