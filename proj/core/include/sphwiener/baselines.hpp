#pragma once

// Reference denoisers: hard thresholding of spatial wavelet coefficient
// samples, and Gauss-Weierstrass kernel smoothing (GWKS), which attenuates
// degree l by exp(-l(l+1) kappa).

#include "sphwiener/harmonic.hpp"
#include "sphwiener/optimal_filter.hpp"
#include "sphwiener/wavelet_bank.hpp"

namespace sphwiener {

struct ThresholdPolicy {
  /// Threshold in units of the per-scale noise standard deviation.
  double multiplier = 3.0;
  /// Noise variance per harmonic coefficient.
  double sigma_sq = 0.0;
};

/// trace(Cz) / L^2, the per-coefficient noise variance of a covariance model.
double mean_noise_variance(const DegreeCovariance& cz);

/// sigma_j^2 = sigma^2 sum_l |psi_{j,l}^0|^2, the variance of a scale-j
/// wavelet coefficient sample under white noise. Directional banks throw
/// kModeMismatch.
double scale_noise_variance(const WaveletBank& bank, int j, double sigma_sq);

/// Zeroes samples below `threshold`: the real part is compared (and kept) for
/// real fields, the magnitude otherwise. Idempotent.
void threshold_samples(SphereMap& map, double threshold, bool real_field);

/// Analyzes f, thresholds every wavelet band on `grid` at
/// multiplier * sigma_j, projects back and synthesizes with the scaling band
/// untouched. f.real_field() selects real-part thresholding.
HarmonicCoeffs hard_threshold_denoise(const HarmonicCoeffs& f, const WaveletBank& bank,
                                      const ThresholdPolicy& policy, const SphereGrid& grid);
/// Same on the Gauss-Legendre grid of the bank bandlimit.
HarmonicCoeffs hard_threshold_denoise(const HarmonicCoeffs& f, const WaveletBank& bank,
                                      const ThresholdPolicy& policy);

/// exp(-l(l+1) kappa).
double gwks_attenuation(int l, double kappa);

/// Degree-wise attenuation; kappa outside [0, 1] throws kInvalidParameter and
/// kappa = 0 returns an exact copy.
HarmonicCoeffs gwks_denoise(const HarmonicCoeffs& f, double kappa);

struct Direction {
  double theta;
  double phi;
};

/// sum_{l < L} exp(-l(l+1) kappa) sum_m Y_l^m(x) conj(Y_l^m(y)).
Complex gw_kernel(const Direction& x, const Direction& y, double kappa, int bandlimit);

}  // namespace sphwiener
