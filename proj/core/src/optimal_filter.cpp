#include "sphwiener/optimal_filter.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "sphwiener/coeff_io.hpp"
#include "sphwiener/error.hpp"
#include "sphwiener/wigner.hpp"

namespace sphwiener {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-10;
constexpr double kPseudoInverseCutoff = 1e-12;

void validate_block(int l, const Eigen::MatrixXcd& block) {
  const int n = 2 * l + 1;
  if (block.rows() != n || block.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance block for l = " + std::to_string(l) +
                                                   " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
  if ((block - block.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale) {
    throw Error(ErrorCode::kNotHermitian, "covariance block for l = " + std::to_string(l) + " is not Hermitian");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(block, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "eigendecomposition failed for l = " + std::to_string(l));
  }
  const double floor = -kPsdTolerance * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < floor) {
    throw Error(ErrorCode::kNotPositiveSemidefinite,
                "covariance block for l = " + std::to_string(l) + " has eigenvalue " +
                    std::to_string(eig.eigenvalues().minCoeff()));
  }
}

void require_same_bandlimit(int a, int b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kBandlimitMismatch,
                std::string(what) + ": bandlimits " + std::to_string(a) + " and " + std::to_string(b));
  }
}

// Minimum-norm solution of H X = B for Hermitian PSD H.
Eigen::MatrixXcd pseudo_solve(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& b) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
  const auto& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inverse = Eigen::VectorXd::Zero(values.size());
  if (largest > 0.0) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (values(i) > kPseudoInverseCutoff * largest) inverse(i) = 1.0 / values(i);
    }
  }
  const auto& v = eig.eigenvectors();
  return v * inverse.asDiagonal() * (v.adjoint() * b);
}

Eigen::MatrixXcd hermitian_solve(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& b) {
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(h);
  if (ldlt.info() == Eigen::Success) {
    const auto d = ldlt.vectorD().cwiseAbs();
    const double largest = d.maxCoeff();
    if (largest > 0.0 && d.minCoeff() > kPseudoInverseCutoff * largest && ldlt.isPositive()) {
      return ldlt.solve(b);
    }
  }
  return pseudo_solve(h, b);
}

}  // namespace

// ---------------------------------------------------------------------------
// DegreeCovariance

DegreeCovariance::DegreeCovariance(int bandlimit) : bandlimit_(bandlimit) {
  if (bandlimit < 1) throw Error(ErrorCode::kInvalidBandlimit, "bandlimit must be >= 1");
  for (int l = 0; l < bandlimit; ++l) blocks_.emplace_back(Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1));
}

DegreeCovariance::DegreeCovariance(int bandlimit, std::vector<Eigen::MatrixXcd> blocks)
    : bandlimit_(bandlimit), blocks_(std::move(blocks)) {
  if (bandlimit < 1) throw Error(ErrorCode::kInvalidBandlimit, "bandlimit must be >= 1");
  if (blocks_.size() != static_cast<std::size_t>(bandlimit)) {
    throw Error(ErrorCode::kDimensionMismatch, "one covariance block per degree required");
  }
  for (int l = 0; l < bandlimit; ++l) validate_block(l, blocks_[l]);
}

DegreeCovariance::DegreeCovariance(int bandlimit, std::vector<Eigen::MatrixXcd> blocks, Unchecked)
    : bandlimit_(bandlimit), blocks_(std::move(blocks)) {}

DegreeCovariance DegreeCovariance::white(int bandlimit, double sigma_sq) {
  if (!(sigma_sq >= 0.0)) throw Error(ErrorCode::kNegativeVariance, "white noise variance must be >= 0");
  std::vector<Eigen::MatrixXcd> blocks;
  for (int l = 0; l < bandlimit; ++l) {
    blocks.emplace_back(sigma_sq * Eigen::MatrixXcd::Identity(2 * l + 1, 2 * l + 1));
  }
  return DegreeCovariance(bandlimit, std::move(blocks), Unchecked{});
}

DegreeCovariance DegreeCovariance::diagonal(int bandlimit, std::span<const double> variances) {
  if (variances.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
    throw Error(ErrorCode::kDimensionMismatch, "expected one variance per coefficient");
  }
  std::vector<Eigen::MatrixXcd> blocks;
  for (int l = 0; l < bandlimit; ++l) {
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1);
    for (int m = -l; m <= l; ++m) {
      const double v = variances[flat_index(l, m)];
      if (!(v >= 0.0)) {
        throw Error(ErrorCode::kNegativeVariance,
                    "variance at (" + std::to_string(l) + ", " + std::to_string(m) + ") is negative");
      }
      block(m + l, m + l) = v;
    }
    blocks.push_back(std::move(block));
  }
  return DegreeCovariance(bandlimit, std::move(blocks), Unchecked{});
}

std::vector<double> DegreeCovariance::diagonal_values() const {
  std::vector<double> out(static_cast<std::size_t>(bandlimit_) * bandlimit_);
  for (int l = 0; l < bandlimit_; ++l)
    for (int m = -l; m <= l; ++m) out[flat_index(l, m)] = blocks_[l](m + l, m + l).real();
  return out;
}

double DegreeCovariance::trace() const {
  double sum = 0.0;
  for (const auto& b : blocks_) sum += b.trace().real();
  return sum;
}

bool DegreeCovariance::is_diagonal() const {
  for (const auto& b : blocks_) {
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c)
        if (r != c && b(r, c) != Complex{}) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FilterSpectrum

FilterSpectrum::FilterSpectrum(int bandlimit, int j_min, std::vector<std::shared_ptr<const Blocks>> per_scale)
    : bandlimit_(bandlimit), j_min_(j_min), per_scale_(std::move(per_scale)) {
  if (per_scale_.empty()) throw Error(ErrorCode::kInvalidScaleRange, "filter needs at least one scale");
  for (const auto& blocks : per_scale_) {
    if (!blocks || blocks->size() != static_cast<std::size_t>(bandlimit)) {
      throw Error(ErrorCode::kDimensionMismatch, "one filter block per degree required");
    }
    for (int l = 0; l < bandlimit; ++l) {
      const auto& b = (*blocks)[l];
      if (b.rows() != 2 * l + 1 || b.cols() != 2 * l + 1) {
        throw Error(ErrorCode::kDimensionMismatch, "filter block size does not match degree");
      }
    }
  }
}

FilterSpectrum FilterSpectrum::scale_independent(int bandlimit, int j_min, int j_max, Blocks blocks) {
  if (j_max < j_min) throw Error(ErrorCode::kInvalidScaleRange, "j_max < j_min");
  auto shared = std::make_shared<const Blocks>(std::move(blocks));
  return FilterSpectrum(bandlimit, j_min,
                        std::vector<std::shared_ptr<const Blocks>>(static_cast<std::size_t>(j_max - j_min + 1), shared));
}

FilterSpectrum FilterSpectrum::from_gains(int bandlimit, int j_min, int j_max, std::span<const double> gains) {
  if (gains.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
    throw Error(ErrorCode::kDimensionMismatch, "expected one gain per coefficient");
  }
  Blocks blocks;
  for (int l = 0; l < bandlimit; ++l) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1);
    for (int m = -l; m <= l; ++m) b(m + l, m + l) = gains[flat_index(l, m)] / wigner_norm(l);
    blocks.push_back(std::move(b));
  }
  return scale_independent(bandlimit, j_min, j_max, std::move(blocks));
}

const FilterSpectrum::Blocks& FilterSpectrum::scale(int j) const {
  if (j < j_min_ || j > j_max()) {
    throw Error(ErrorCode::kInvalidScaleRange, "filter has no scale " + std::to_string(j));
  }
  return *per_scale_[static_cast<std::size_t>(j - j_min_)];
}

bool FilterSpectrum::shares_blocks() const noexcept {
  for (const auto& p : per_scale_)
    if (p != per_scale_.front()) return false;
  return true;
}

FilterSpectrum FilterSpectrum::with_entry(int j, int l, int m, int k, Complex value) const {
  auto blocks = scale(j);
  blocks.at(static_cast<std::size_t>(l))(m + l, k + l) = value;
  auto per_scale = per_scale_;
  per_scale[static_cast<std::size_t>(j - j_min_)] = std::make_shared<const Blocks>(std::move(blocks));
  return FilterSpectrum(bandlimit_, j_min_, std::move(per_scale));
}

// ---------------------------------------------------------------------------
// Solvers

FilterSpectrum solve_filter(const DegreeCovariance& cs, const DegreeCovariance& cz, int j_min, int j_max) {
  require_same_bandlimit(cs.bandlimit(), cz.bandlimit(), "solve_filter");
  const int bandlimit = cs.bandlimit();
  FilterSpectrum::Blocks blocks;
  blocks.reserve(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    const Eigen::MatrixXcd a = wigner_norm(l) * (cs.block(l) + cz.block(l));
    // A^T is Hermitian because A is. Column m of the right-hand side holds
    // b(l, m), i.e. row m of Cs; solution column m is filter row m.
    const Eigen::MatrixXcd a_t = a.transpose();
    const Eigen::MatrixXcd rhs = cs.block(l).transpose();
    const Eigen::MatrixXcd solution = hermitian_solve(a_t, rhs);
    blocks.push_back(solution.transpose());
  }
  return FilterSpectrum::scale_independent(bandlimit, j_min, j_max, std::move(blocks));
}

std::vector<double> wiener_axisym_gains(std::span<const double> cs_diag, std::span<const double> cz_diag) {
  if (cs_diag.size() != cz_diag.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "source and noise variances differ in length");
  }
  std::vector<double> gains(cs_diag.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double s = cs_diag[i];
    const double z = cz_diag[i];
    if (!(s >= 0.0) || !(z >= 0.0)) {
      throw Error(ErrorCode::kNegativeVariance, "variances must be non-negative");
    }
    const double total = s + z;
    gains[i] = total > 0.0 ? s / total : 0.0;
  }
  return gains;
}

std::vector<double> wiener_axisym_gains(const DegreeCovariance& cs, const DegreeCovariance& cz) {
  require_same_bandlimit(cs.bandlimit(), cz.bandlimit(), "wiener_axisym_gains");
  return wiener_axisym_gains(cs.diagonal_values(), cz.diagonal_values());
}

WaveletDecomposition apply_filter(const WaveletDecomposition& dec, const FilterSpectrum& filter) {
  require_same_bandlimit(dec.bandlimit(), filter.bandlimit(), "apply_filter");
  const auto& bank = dec.bank();
  if (filter.j_min() > bank.j_min() || filter.j_max() < bank.j_max()) {
    throw Error(ErrorCode::kInvalidScaleRange, "filter does not cover every wavelet scale");
  }
  WaveletDecomposition out = dec;
  const int bandlimit = dec.bandlimit();
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    if (dec.mode() == TransformMode::kAxisymmetric) {
      auto& w = out.axisymmetric(j);
      const auto& in = dec.axisymmetric(j);
      for (int l = 0; l < bandlimit; ++l) {
        Eigen::VectorXcd v(2 * l + 1);
        for (int m = -l; m <= l; ++m) v(m + l) = in(l, m);
        const Eigen::VectorXcd r = wigner_norm(l) * (filter.block(j, l) * v);
        for (int m = -l; m <= l; ++m) w(l, m) = r(m + l);
      }
      w.set_real_field(false);
      if (in.real_field() && w.satisfies_real_symmetry()) w.set_real_field(true);
    } else {
      auto& w = out.directional(j);
      const auto& in = dec.directional(j);
      for (int l = 0; l < bandlimit; ++l) w.set_block(l, wigner_norm(l) * (filter.block(j, l) * in.block(l)));
    }
  }
  return out;
}

WaveletDecomposition apply_gains(const WaveletDecomposition& dec, std::span<const double> gains) {
  const int bandlimit = dec.bandlimit();
  if (gains.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
    throw Error(ErrorCode::kDimensionMismatch, "expected one gain per coefficient");
  }
  WaveletDecomposition out = dec;
  const auto& bank = dec.bank();
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    if (dec.mode() == TransformMode::kAxisymmetric) {
      auto& w = out.axisymmetric(j);
      for (int l = 0; l < bandlimit; ++l)
        for (int m = -l; m <= l; ++m) w(l, m) *= gains[flat_index(l, m)];
      const bool real = w.real_field();
      w.set_real_field(false);
      if (real && w.satisfies_real_symmetry()) w.set_real_field(true);
    } else {
      auto& w = out.directional(j);
      for (int l = 0; l < bandlimit; ++l)
        for (int m = -l; m <= l; ++m)
          for (int mp = -l; mp <= l; ++mp) w(l, m, mp) *= gains[flat_index(l, m)];
    }
  }
  return out;
}

HarmonicCoeffs denoise(const HarmonicCoeffs& f, const DegreeCovariance& cs, const DegreeCovariance& cz,
                       const WaveletBank& bank, const DenoiseOptions& options) {
  require_same_bandlimit(cs.bandlimit(), cz.bandlimit(), "denoise covariances");
  require_same_bandlimit(cs.bandlimit(), bank.bandlimit(), "denoise covariance vs bank");
  const auto dec = analyze(f, bank);
  const auto gains = wiener_axisym_gains(cs, cz);

  auto filtered = options.mode == FilterMode::kMatrix
                      ? apply_filter(dec, solve_filter(cs, cz, bank.j_min(), bank.j_max()))
                      : apply_gains(dec, gains);
  if (options.filter_scaling) {
    auto& s = filtered.scaling();
    for (std::size_t i = 0; i < gains.size(); ++i) s.values()[i] *= gains[i];
  }
  return synthesize(filtered);
}

double expected_wavelet_mse(const FilterSpectrum& filter, const DegreeCovariance& cs, const DegreeCovariance& cz,
                            const WaveletBank& bank) {
  require_same_bandlimit(cs.bandlimit(), cz.bandlimit(), "expected_wavelet_mse");
  require_same_bandlimit(cs.bandlimit(), bank.bandlimit(), "expected_wavelet_mse");
  require_same_bandlimit(filter.bandlimit(), bank.bandlimit(), "expected_wavelet_mse");
  const int bandlimit = bank.bandlimit();
  double total = 0.0;
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    const auto psi = wavelet_spectrum(bank, j);
    for (int l = 0; l < bandlimit; ++l) {
      double psi_energy = 0.0;
      for (int mp = -l; mp <= l; ++mp) psi_energy += std::norm(psi(l, mp));
      if (psi_energy == 0.0) continue;
      const double c = wigner_norm(l);
      const Eigen::MatrixXcd m_cov = cs.block(l) + cz.block(l);
      const auto& xi = filter.block(j, l);
      double degree = 0.0;
      for (int m = -l; m <= l; ++m) {
        // E|C r^T f - s_m|^2 = C^2 r^T M conj(r) - 2 Re(C r^T Cs[:, m]) + Cs_mm
        const Eigen::VectorXcd r = xi.row(m + l).transpose();
        const Complex quad = (r.transpose() * m_cov * r.conjugate())(0, 0);
        const Complex cross = (r.transpose() * cs.block(l).col(m + l))(0, 0);
        degree += c * c * quad.real() - 2.0 * c * cross.real() + cs.block(l)(m + l, m + l).real();
      }
      total += c * psi_energy * degree;
    }
  }
  return total;
}

void write_filter_csv(std::ostream& out, const FilterSpectrum& filter) {
  out << "j,l,m,k,re,im\n";
  for (int j = filter.j_min(); j <= filter.j_max(); ++j) {
    for (int l = 0; l < filter.bandlimit(); ++l) {
      const auto& b = filter.block(j, l);
      for (int m = -l; m <= l; ++m)
        for (int k = -l; k <= l; ++k) {
          const auto v = b(m + l, k + l);
          out << j << ',' << l << ',' << m << ',' << k << ',' << format_double(v.real()) << ','
              << format_double(v.imag()) << '\n';
        }
    }
  }
}

void write_filter_csv(const std::filesystem::path& path, const FilterSpectrum& filter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_filter_csv(out, filter);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace sphwiener
