#pragma once

// Noise synthesis, covariance models and the SNR metric.
//
// Coefficient (l, m) draws from its own stream (seed, l*l + l + m), and a
// full-block model draws degree l from stream (seed, l), so sampling is
// independent of evaluation order.

#include <cstdint>
#include <optional>
#include <vector>

#include "sphwiener/harmonic.hpp"
#include "sphwiener/optimal_filter.hpp"

namespace sphwiener {

enum class NoiseKind { kWhiteDiagonal, kDiagonalAnisotropic, kFullBlock };

/// Zero-mean Gaussian noise in the harmonic domain.
///
/// For real fields the conjugate symmetry z_l^{-m} = (-1)^m conj(z_l^m) is
/// imposed; m = 0 draws real N(0, v) and m > 0 draws independent real and
/// imaginary parts N(0, v / 2), so E|z_l^m|^2 = v for every (l, m).
class NoiseModel {
 public:
  static NoiseModel white(double sigma_sq, std::uint64_t seed, bool real_field = true);
  /// Per-coefficient variances in flat order. Real fields need
  /// v(l, -m) = v(l, m).
  static NoiseModel diagonal(std::vector<double> variances, std::uint64_t seed, bool real_field = true);
  /// Correlated complex noise within each degree. Not available for real
  /// fields, whose symmetry constraint ties the block structure to m <-> -m.
  static NoiseModel full_block(DegreeCovariance blocks, std::uint64_t seed);

  NoiseKind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool real_field() const noexcept { return real_field_; }
  double sigma_sq() const noexcept { return sigma_sq_; }

  /// Same model with another seed.
  NoiseModel with_seed(std::uint64_t seed) const;

  /// Covariance of sample_noise output at bandlimit L.
  DegreeCovariance covariance(int bandlimit) const;

 private:
  NoiseModel() = default;
  friend HarmonicCoeffs sample_noise(const NoiseModel& model, int bandlimit);

  NoiseKind kind_ = NoiseKind::kWhiteDiagonal;
  double sigma_sq_ = 0.0;
  std::vector<double> variances_;
  std::optional<DegreeCovariance> blocks_;
  std::uint64_t seed_ = 0;
  bool real_field_ = true;
};

/// sigma^2 = 10^(-snr/10) ||s||^2 / L^2. Zero signals throw kUndefinedSnr.
double sigma_from_input_snr(const HarmonicCoeffs& s, double snr_in_db);

HarmonicCoeffs sample_noise(const NoiseModel& model, int bandlimit);

/// Rank-one blocks s_l s_l^H for every degree.
DegreeCovariance empirical_source_covariance(const HarmonicCoeffs& s);

/// 20 log10(||s|| / ||d - s||) from spectral norms. Returns +infinity when
/// d equals s; a zero source throws kUndefinedSnr.
double snr_db(const HarmonicCoeffs& d, const HarmonicCoeffs& s);

struct SpectrumLaw {
  enum class Kind { kRed, kFlat };
  Kind kind = Kind::kRed;
  double exponent = 2.0;

  static SpectrumLaw red(double exponent) { return {Kind::kRed, exponent}; }
  static SpectrumLaw flat() { return {Kind::kFlat, 0.0}; }
  /// Expected per-coefficient power at degree l before normalization.
  double power(int l) const;
};

/// Real-field Gaussian source with E|s_l^m|^2 proportional to law.power(l),
/// scaled to unit energy. Throws kInvalidBandlimit for L < 2.
HarmonicCoeffs synthetic_source(int bandlimit, const SpectrumLaw& law, std::uint64_t seed);

}  // namespace sphwiener
