#pragma once

// Scale-discretized wavelet transform kept entirely in spectral form.
//
// Directional mode stores the SO(3) Wigner coefficients of each wavelet
// coefficient function,
//   (W_j)^l_{m,m'} = (f)_l^m conj((psi_j)_l^{m'}),
// so that W_j(rho) = sum (W_j)^l_{m,m'} conj(D^l_{m,m'}(rho)).
// Axisymmetric mode stores sphere-spectral coefficients
//   (W_j)_l^m = sqrt(C_l / 2pi) (f)_l^m conj((psi_j)_l^0),
// and the scaling band is always sphere-spectral,
//   (S)_l^m = sqrt(C_l / 2pi) (f)_l^m conj((Phi)_l^0),  C_l = 8 pi^2/(2l+1).
//
// Synthesis evaluates the reconstruction integrals through Wigner-D and
// harmonic orthogonality:
//   (f)_l^m = sqrt(C_l/2pi) (S)_l^m (Phi)_l^0
//           + sum_j C_l sum_m' (W_j)^l_{m,m'} (psi_j)_l^{m'}           (directional)
//           + sum_j sqrt(2 pi C_l) (W_j)_l^m (psi_j)_l^0                (axisymmetric)
// The axisymmetric factor carries the 2 pi from integrating out omega.

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sphwiener/harmonic.hpp"
#include "sphwiener/wavelet_bank.hpp"
#include "sphwiener/wigner.hpp"

namespace sphwiener {

/// Coefficients (g)^l_{m,m'} of a bandlimited function on SO(3).
class WignerSpectrum {
 public:
  explicit WignerSpectrum(int bandlimit);

  int bandlimit() const noexcept { return bandlimit_; }
  std::size_t size() const noexcept { return values_.size(); }

  static std::size_t offset(int l) noexcept {
    return static_cast<std::size_t>(l) * (4 * static_cast<std::size_t>(l) * l - 1) / 3;
  }

  Complex& operator()(int l, int m, int mp) { return values_[index(l, m, mp)]; }
  const Complex& operator()(int l, int m, int mp) const { return values_[index(l, m, mp)]; }

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Degree-l block with rows m and columns m'.
  Eigen::MatrixXcd block(int l) const;
  void set_block(int l, const Eigen::MatrixXcd& values);

  /// sum_l C_l sum |(g)^l_{m,m'}|^2, the L2 norm squared on SO(3).
  double energy() const noexcept;

 private:
  std::size_t index(int l, int m, int mp) const noexcept {
    return offset(l) + static_cast<std::size_t>(m + l) * (2 * l + 1) + static_cast<std::size_t>(mp + l);
  }

  int bandlimit_;
  std::vector<Complex> values_;
};

enum class TransformMode { kAxisymmetric, kDirectional };

using ScaleCoefficients = std::variant<HarmonicCoeffs, WignerSpectrum>;

class WaveletDecomposition {
 public:
  /// Validates that every wavelet entry matches `mode` and the bank bandlimit.
  WaveletDecomposition(std::shared_ptr<const WaveletBank> bank, TransformMode mode,
                       HarmonicCoeffs scaling, std::vector<ScaleCoefficients> wavelets);

  const WaveletBank& bank() const noexcept { return *bank_; }
  std::shared_ptr<const WaveletBank> shared_bank() const noexcept { return bank_; }
  TransformMode mode() const noexcept { return mode_; }
  int bandlimit() const noexcept { return bank_->bandlimit(); }

  const HarmonicCoeffs& scaling() const noexcept { return scaling_; }
  HarmonicCoeffs& scaling() noexcept { return scaling_; }

  /// Throw kModeMismatch when the decomposition is in the other mode.
  const HarmonicCoeffs& axisymmetric(int j) const;
  HarmonicCoeffs& axisymmetric(int j);
  const WignerSpectrum& directional(int j) const;
  WignerSpectrum& directional(int j);

  /// Band energies; they add up to the signal energy for an admissible bank.
  /// Wavelet energy is the L2 norm squared on SO(3); an axisymmetric
  /// coefficient function is constant in omega, hence 2 pi times its sphere
  /// energy.
  double scaling_energy() const noexcept { return scaling_.energy(); }
  double wavelet_energy(int j) const;

 private:
  std::size_t slot(int j) const;

  std::shared_ptr<const WaveletBank> bank_;
  TransformMode mode_;
  HarmonicCoeffs scaling_;
  std::vector<ScaleCoefficients> wavelets_;
};

/// Mode follows the bank: axisymmetric banks give sphere-spectral wavelet
/// coefficients. Signals with f.L < bank.L are zero-padded; f.L > bank.L
/// throws kBandlimitMismatch.
WaveletDecomposition analyze(const HarmonicCoeffs& f, const WaveletBank& bank);
WaveletDecomposition analyze(const HarmonicCoeffs& f, std::shared_ptr<const WaveletBank> bank);
/// Explicit mode; kAxisymmetric on a directional bank throws kModeMismatch.
WaveletDecomposition analyze(const HarmonicCoeffs& f, std::shared_ptr<const WaveletBank> bank,
                             TransformMode mode);

HarmonicCoeffs synthesize(const WaveletDecomposition& dec);

/// Scale-j wavelet coefficients sampled on the Gauss-Legendre grid of the
/// bank bandlimit (axisymmetric mode only).
SphereMap wavelet_coeff_map(const WaveletDecomposition& dec, int j);

/// g(rho) = sum (g)^l_{m,m'} conj(D^l_{m,m'}(rho)).
Complex eval_so3_point(const WignerSpectrum& spectrum, const EulerAngles& rho);

}  // namespace sphwiener
