#pragma once

// Minimum mean-square-error filtering of wavelet coefficients.
//
// For every degree l the filter row Xi(.; j)^l_{m,.} solves
//   A^T Xi = b,   A_{k,k'} = C_l (Cs_{lk,lk'} + Cz_{lk,lk'}),   b_{k'} = Cs_{lm,lk'},
// with C_l = 8 pi^2 / (2l+1). Nothing in A or b depends on the scale j, so one
// set of blocks serves every scale. The filtered coefficients are
//   (W~_j)^l_{m,m'} = C_l sum_k Xi^l_{m,k} (W_j)^l_{k,m'},
// i.e. a per-degree matrix product, and for diagonal covariances C_l Xi
// reduces to the gains Cs / (Cs + Cz).

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sphwiener/harmonic.hpp"
#include "sphwiener/wavelet_bank.hpp"
#include "sphwiener/wavelet_transform.hpp"

namespace sphwiener {

/// Same-degree spectral covariance blocks C_{lm,lm'} for l < L.
class DegreeCovariance {
 public:
  /// All-zero covariance.
  explicit DegreeCovariance(int bandlimit);
  /// Validates block sizes (kDimensionMismatch), Hermitian symmetry to 1e-12
  /// relative to the block scale (kNotHermitian) and eigenvalues >= -1e-10
  /// relative (kNotPositiveSemidefinite).
  DegreeCovariance(int bandlimit, std::vector<Eigen::MatrixXcd> blocks);

  /// sigma^2 I.
  static DegreeCovariance white(int bandlimit, double sigma_sq);
  /// Diagonal blocks from per-coefficient variances in flat (l, m) order.
  static DegreeCovariance diagonal(int bandlimit, std::span<const double> variances);

  int bandlimit() const noexcept { return bandlimit_; }
  const Eigen::MatrixXcd& block(int l) const { return blocks_.at(static_cast<std::size_t>(l)); }
  double variance(int l, int m) const { return blocks_.at(static_cast<std::size_t>(l))(m + l, m + l).real(); }
  /// Per-coefficient variances in flat order.
  std::vector<double> diagonal_values() const;
  double trace() const;
  /// Whether every block is diagonal.
  bool is_diagonal() const;

 private:
  struct Unchecked {};
  DegreeCovariance(int bandlimit, std::vector<Eigen::MatrixXcd> blocks, Unchecked);
  friend DegreeCovariance empirical_source_covariance(const HarmonicCoeffs& s);

  int bandlimit_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Per-scale, per-degree filter matrices Xi(.; j)^l with rows m, columns k.
class FilterSpectrum {
 public:
  using Blocks = std::vector<Eigen::MatrixXcd>;

  /// One block set per scale j_min .. j_min + per_scale.size() - 1.
  FilterSpectrum(int bandlimit, int j_min, std::vector<std::shared_ptr<const Blocks>> per_scale);
  /// The same block set for every scale in [j_min, j_max].
  static FilterSpectrum scale_independent(int bandlimit, int j_min, int j_max, Blocks blocks);
  /// Xi^l_{m,k} = gain_{lm} / C_l * delta_{m,k}; `gains` in flat order.
  static FilterSpectrum from_gains(int bandlimit, int j_min, int j_max, std::span<const double> gains);

  int bandlimit() const noexcept { return bandlimit_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_min_ + static_cast<int>(per_scale_.size()) - 1; }

  const Blocks& scale(int j) const;
  const Eigen::MatrixXcd& block(int j, int l) const { return scale(j).at(static_cast<std::size_t>(l)); }
  /// True when every scale shares one block set.
  bool shares_blocks() const noexcept;

  /// Copy with a single entry replaced at scale j only.
  FilterSpectrum with_entry(int j, int l, int m, int k, Complex value) const;

 private:
  int bandlimit_;
  int j_min_;
  std::vector<std::shared_ptr<const Blocks>> per_scale_;
};

/// Solves the normal equations for every (l, m). Singular systems fall back
/// to the minimum-norm solution from an eigendecomposition with relative
/// cutoff 1e-12.
FilterSpectrum solve_filter(const DegreeCovariance& cs, const DegreeCovariance& cz, int j_min, int j_max);

/// Cs / (Cs + Cz) per coefficient in flat order; 0/0 gives 0.
std::vector<double> wiener_axisym_gains(std::span<const double> cs_diag, std::span<const double> cz_diag);
std::vector<double> wiener_axisym_gains(const DegreeCovariance& cs, const DegreeCovariance& cz);

/// Filters the wavelet bands; the scaling band is passed through.
WaveletDecomposition apply_filter(const WaveletDecomposition& dec, const FilterSpectrum& filter);
/// Scales wavelet coefficient rows by per-(l, m) gains (closed form).
WaveletDecomposition apply_gains(const WaveletDecomposition& dec, std::span<const double> gains);

enum class FilterMode { kMatrix, kAxisymClosedForm };

struct DenoiseOptions {
  FilterMode mode = FilterMode::kAxisymClosedForm;
  /// Apply the diagonal Wiener gain to the scaling band as well.
  bool filter_scaling = false;
};

/// analyze -> filter -> synthesize.
HarmonicCoeffs denoise(const HarmonicCoeffs& f, const DegreeCovariance& cs, const DegreeCovariance& cz,
                       const WaveletBank& bank, const DenoiseOptions& options = {});

/// Expected joint SO(3)-scale squared error of filtered wavelet coefficients
/// against the noise-free ones, evaluated in closed form from the
/// covariances. For axisymmetric banks the sphere-domain error is this
/// value divided by 2 pi.
double expected_wavelet_mse(const FilterSpectrum& filter, const DegreeCovariance& cs,
                            const DegreeCovariance& cz, const WaveletBank& bank);

/// CSV `j,l,m,k,re,im`, one row per stored entry.
void write_filter_csv(std::ostream& out, const FilterSpectrum& filter);
void write_filter_csv(const std::filesystem::path& path, const FilterSpectrum& filter);

}  // namespace sphwiener
