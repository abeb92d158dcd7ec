#include "sphwiener/baselines.hpp"

#include <cmath>
#include <string>

#include "sphwiener/error.hpp"
#include "sphwiener/wavelet_transform.hpp"

namespace sphwiener {

namespace {

void check_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "kappa must lie in [0, 1], got " + std::to_string(kappa));
  }
}

}  // namespace

double mean_noise_variance(const DegreeCovariance& cz) {
  const double l = cz.bandlimit();
  return cz.trace() / (l * l);
}

double scale_noise_variance(const WaveletBank& bank, int j, double sigma_sq) {
  if (!bank.axisymmetric()) {
    throw Error(ErrorCode::kModeMismatch, "scale noise variance needs an axisymmetric bank");
  }
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::kNegativeVariance, "noise variance must be >= 0");
  const auto psi = wavelet_spectrum(bank, j);
  double sum = 0.0;
  for (int l = 0; l < bank.bandlimit(); ++l) sum += std::norm(psi(l, 0));
  return sigma_sq * sum;
}

void threshold_samples(SphereMap& map, double threshold, bool real_field) {
  for (auto& v : map.samples()) {
    if (real_field) {
      v = std::abs(v.real()) < threshold ? Complex{} : Complex(v.real(), 0.0);
    } else if (std::abs(v) < threshold) {
      v = Complex{};
    }
  }
}

HarmonicCoeffs hard_threshold_denoise(const HarmonicCoeffs& f, const WaveletBank& bank,
                                      const ThresholdPolicy& policy, const SphereGrid& grid) {
  if (!(policy.multiplier > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "threshold multiplier must be positive");
  }
  if (!bank.axisymmetric()) {
    throw Error(ErrorCode::kModeMismatch, "hard thresholding needs an axisymmetric bank");
  }
  const int bandlimit = bank.bandlimit();
  if (!grid.exact_for(bandlimit)) {
    throw Error(ErrorCode::kUndersampledGrid, "thresholding grid is not exact for L = " + std::to_string(bandlimit));
  }
  auto dec = analyze(f, bank);
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    const double threshold = policy.multiplier * std::sqrt(scale_noise_variance(bank, j, policy.sigma_sq));
    auto& w = dec.axisymmetric(j);
    auto samples = inverse_sht(w, grid);
    threshold_samples(samples, threshold, f.real_field());
    w = forward_sht(samples, bandlimit);
  }
  auto out = synthesize(dec);
  if (f.real_field() && out.satisfies_real_symmetry()) out.set_real_field(true);
  return out;
}

HarmonicCoeffs hard_threshold_denoise(const HarmonicCoeffs& f, const WaveletBank& bank,
                                      const ThresholdPolicy& policy) {
  return hard_threshold_denoise(f, bank, policy, make_gauss_legendre_grid(bank.bandlimit()));
}

double gwks_attenuation(int l, double kappa) {
  return std::exp(-static_cast<double>(l) * (l + 1) * kappa);
}

HarmonicCoeffs gwks_denoise(const HarmonicCoeffs& f, double kappa) {
  check_kappa(kappa);
  HarmonicCoeffs out = f;
  if (kappa == 0.0) return out;
  for (int l = 0; l < f.bandlimit(); ++l) {
    const double a = gwks_attenuation(l, kappa);
    for (int m = -l; m <= l; ++m) out(l, m) *= a;
  }
  return out;
}

Complex gw_kernel(const Direction& x, const Direction& y, double kappa, int bandlimit) {
  check_kappa(kappa);
  Complex sum{};
  for (int l = 0; l < bandlimit; ++l) {
    Complex degree{};
    for (int m = -l; m <= l; ++m) degree += ylm(l, m, x.theta, x.phi) * std::conj(ylm(l, m, y.theta, y.phi));
    sum += gwks_attenuation(l, kappa) * degree;
  }
  return sum;
}

}  // namespace sphwiener
