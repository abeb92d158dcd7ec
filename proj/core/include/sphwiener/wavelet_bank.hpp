#pragma once

// Scale-discretized harmonic tiling on the sphere.
//
// The generator is the smooth bump s(t) = exp(-1/(1-t^2)) mapped onto
// (1/lambda, 1), integrated into the cumulative profile
//   k(t) = int_t^1 s^2(u)/u du / int_{1/lambda}^1 s^2(u)/u du,
// with kappa(t) = sqrt(k(t/lambda) - k(t)) and eta(t) = sqrt(k(t)). Scale j
// uses kappa(l / lambda^j); the scaling band uses eta(l / lambda^j1). The sum
// eta^2 + sum_j kappa_j^2 telescopes to k(l / lambda^(j2+1)) = 1.

#include <vector>

#include "sphwiener/harmonic.hpp"

namespace sphwiener {

namespace tiling {

/// Bump mapped to (1/lambda, 1); zero outside.
double bump(double t, double lambda);
/// Cumulative profile k_lambda(t): 1 for t <= 1/lambda, 0 for t >= 1.
double cumulative(double t, double lambda);
double kappa(double t, double lambda);
double eta(double t, double lambda);

/// Smallest j >= 0 with lambda^j >= L - 1.
int max_scale(int bandlimit, double lambda);

}  // namespace tiling

class WaveletBank {
 public:
  int bandlimit() const noexcept { return bandlimit_; }
  double dilation() const noexcept { return dilation_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_max_; }
  int scale_count() const noexcept { return j_max_ - j_min_ + 1; }

  /// kappa_j(l); zero outside (lambda^(j-1), lambda^(j+1)).
  double kappa(int j, int l) const;
  double eta(int l) const;
  const HarmonicCoeffs& directionality() const noexcept { return zeta_; }
  Complex zeta(int l, int m) const { return zeta_(l, m); }

  /// True when zeta vanishes off m = 0.
  bool axisymmetric() const noexcept { return axisymmetric_; }

  /// Copy with kappa_j set to zero everywhere, i.e. the scale removed from
  /// the tiling. The result is not admissible.
  WaveletBank without_scale(int j) const;

  /// Copy using a user directionality. Every degree with a nonzero row must
  /// have sum_m |zeta_{l,m}|^2 = 1 (to 1e-10); throws kInvalidDirectionality.
  WaveletBank with_directionality(const HarmonicCoeffs& zeta) const;

 private:
  friend WaveletBank build_bank(int bandlimit, double lambda, int j_min);
  WaveletBank(int bandlimit, double lambda, int j_min, int j_max);

  void require_scale(int j) const;

  int bandlimit_;
  double dilation_;
  int j_min_;
  int j_max_;
  std::vector<std::vector<double>> kappa_;  // [j - j_min][l]
  std::vector<double> eta_;
  HarmonicCoeffs zeta_;
  bool axisymmetric_ = true;
};

/// Axisymmetric bank (zeta_{l,0} = 1). Requires L >= 2, lambda > 1 and
/// 0 <= j_min <= max_scale(L, lambda).
WaveletBank build_bank(int bandlimit, double lambda, int j_min);

/// (psi_j)_l^m = kappa_j(l) zeta_{l,m} / sqrt(8 pi^2 / (2l+1)).
HarmonicCoeffs wavelet_spectrum(const WaveletBank& bank, int j);
/// (Phi)_l^0 = sqrt(2 pi (2l+1) / (8 pi^2)) eta(l); zero off m = 0.
HarmonicCoeffs scaling_spectrum(const WaveletBank& bank);

/// max over l < L of |C_l ((1/2pi)|Phi_l^0|^2 + sum_j sum_m' |psi_j,l^m'|^2) - 1|.
double check_admissibility(const WaveletBank& bank);

}  // namespace sphwiener
