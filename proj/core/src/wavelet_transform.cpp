#include "sphwiener/wavelet_transform.hpp"

#include <cmath>
#include <string>

#include "sphwiener/error.hpp"

namespace sphwiener {

WignerSpectrum::WignerSpectrum(int bandlimit) : bandlimit_(bandlimit) {
  if (bandlimit < 1) throw Error(ErrorCode::kInvalidBandlimit, "bandlimit must be >= 1");
  values_.assign(offset(bandlimit), Complex{});
}

Eigen::MatrixXcd WignerSpectrum::block(int l) const {
  const int n = 2 * l + 1;
  Eigen::MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = values_[offset(l) + static_cast<std::size_t>(r) * n + c];
  return out;
}

void WignerSpectrum::set_block(int l, const Eigen::MatrixXcd& values) {
  const int n = 2 * l + 1;
  if (values.rows() != n || values.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "block size does not match degree");
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) values_[offset(l) + static_cast<std::size_t>(r) * n + c] = values(r, c);
}

double WignerSpectrum::energy() const noexcept {
  double total = 0.0;
  for (int l = 0; l < bandlimit_; ++l) {
    double degree = 0.0;
    for (std::size_t i = offset(l); i < offset(l + 1); ++i) degree += std::norm(values_[i]);
    total += wigner_norm(l) * degree;
  }
  return total;
}

WaveletDecomposition::WaveletDecomposition(std::shared_ptr<const WaveletBank> bank,
                                           TransformMode mode, HarmonicCoeffs scaling,
                                           std::vector<ScaleCoefficients> wavelets)
    : bank_(std::move(bank)), mode_(mode), scaling_(std::move(scaling)), wavelets_(std::move(wavelets)) {
  if (!bank_) throw Error(ErrorCode::kInvalidParameter, "decomposition needs a bank");
  const int bandlimit = bank_->bandlimit();
  if (mode_ == TransformMode::kAxisymmetric && !bank_->axisymmetric()) {
    throw Error(ErrorCode::kModeMismatch, "axisymmetric decomposition of a directional bank");
  }
  if (scaling_.bandlimit() != bandlimit) {
    throw Error(ErrorCode::kBandlimitMismatch, "scaling coefficients do not match the bank");
  }
  if (wavelets_.size() != static_cast<std::size_t>(bank_->scale_count())) {
    throw Error(ErrorCode::kDimensionMismatch, "one wavelet entry per scale required");
  }
  for (const auto& w : wavelets_) {
    const bool axis = std::holds_alternative<HarmonicCoeffs>(w);
    if (axis != (mode_ == TransformMode::kAxisymmetric)) {
      throw Error(ErrorCode::kModeMismatch, "wavelet entry type does not match decomposition mode");
    }
    const int wl = axis ? std::get<HarmonicCoeffs>(w).bandlimit() : std::get<WignerSpectrum>(w).bandlimit();
    if (wl != bandlimit) {
      throw Error(ErrorCode::kBandlimitMismatch, "wavelet coefficients do not match the bank");
    }
  }
}

std::size_t WaveletDecomposition::slot(int j) const {
  if (j < bank_->j_min() || j > bank_->j_max()) {
    throw Error(ErrorCode::kInvalidScaleRange, "scale " + std::to_string(j) + " not in decomposition");
  }
  return static_cast<std::size_t>(j - bank_->j_min());
}

const HarmonicCoeffs& WaveletDecomposition::axisymmetric(int j) const {
  const auto* p = std::get_if<HarmonicCoeffs>(&wavelets_[slot(j)]);
  if (!p) throw Error(ErrorCode::kModeMismatch, "decomposition is directional");
  return *p;
}

HarmonicCoeffs& WaveletDecomposition::axisymmetric(int j) {
  auto* p = std::get_if<HarmonicCoeffs>(&wavelets_[slot(j)]);
  if (!p) throw Error(ErrorCode::kModeMismatch, "decomposition is directional");
  return *p;
}

const WignerSpectrum& WaveletDecomposition::directional(int j) const {
  const auto* p = std::get_if<WignerSpectrum>(&wavelets_[slot(j)]);
  if (!p) throw Error(ErrorCode::kModeMismatch, "decomposition is axisymmetric");
  return *p;
}

WignerSpectrum& WaveletDecomposition::directional(int j) {
  auto* p = std::get_if<WignerSpectrum>(&wavelets_[slot(j)]);
  if (!p) throw Error(ErrorCode::kModeMismatch, "decomposition is axisymmetric");
  return *p;
}

double WaveletDecomposition::wavelet_energy(int j) const {
  const auto& w = wavelets_[slot(j)];
  if (const auto* a = std::get_if<HarmonicCoeffs>(&w)) return 2.0 * kPi * a->energy();
  return std::get<WignerSpectrum>(w).energy();
}

WaveletDecomposition analyze(const HarmonicCoeffs& f, const WaveletBank& bank) {
  return analyze(f, std::make_shared<const WaveletBank>(bank));
}

WaveletDecomposition analyze(const HarmonicCoeffs& f, std::shared_ptr<const WaveletBank> bank) {
  const auto mode = bank->axisymmetric() ? TransformMode::kAxisymmetric : TransformMode::kDirectional;
  return analyze(f, std::move(bank), mode);
}

WaveletDecomposition analyze(const HarmonicCoeffs& f, std::shared_ptr<const WaveletBank> bank,
                             TransformMode mode) {
  if (!bank) throw Error(ErrorCode::kInvalidParameter, "analyze needs a bank");
  const int bandlimit = bank->bandlimit();
  if (f.bandlimit() > bandlimit) {
    throw Error(ErrorCode::kBandlimitMismatch, "signal bandlimit " + std::to_string(f.bandlimit()) +
                                                   " exceeds bank bandlimit " + std::to_string(bandlimit));
  }
  if (mode == TransformMode::kAxisymmetric && !bank->axisymmetric()) {
    throw Error(ErrorCode::kModeMismatch, "axisymmetric analysis requires an axisymmetric bank");
  }

  auto coeff = [&](int l, int m) { return l < f.bandlimit() ? f(l, m) : Complex{}; };

  const auto phi = scaling_spectrum(*bank);
  HarmonicCoeffs scaling(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    const Complex factor = std::sqrt(wigner_norm(l) / (2.0 * kPi)) * std::conj(phi(l, 0));
    for (int m = -l; m <= l; ++m) scaling(l, m) = factor * coeff(l, m);
  }

  std::vector<ScaleCoefficients> wavelets;
  for (int j = bank->j_min(); j <= bank->j_max(); ++j) {
    const auto psi = wavelet_spectrum(*bank, j);
    if (mode == TransformMode::kAxisymmetric) {
      HarmonicCoeffs w(bandlimit);
      for (int l = 0; l < bandlimit; ++l) {
        const Complex factor = std::sqrt(wigner_norm(l) / (2.0 * kPi)) * std::conj(psi(l, 0));
        for (int m = -l; m <= l; ++m) w(l, m) = factor * coeff(l, m);
      }
      wavelets.emplace_back(std::move(w));
    } else {
      WignerSpectrum w(bandlimit);
      for (int l = 0; l < bandlimit; ++l)
        for (int m = -l; m <= l; ++m)
          for (int mp = -l; mp <= l; ++mp) w(l, m, mp) = coeff(l, m) * std::conj(psi(l, mp));
      wavelets.emplace_back(std::move(w));
    }
  }
  if (f.real_field() && bank->axisymmetric()) {
    // Real tiling values keep the symmetry; flag it so downstream maps know.
    if (scaling.satisfies_real_symmetry()) scaling.set_real_field(true);
    for (auto& w : wavelets) {
      if (auto* a = std::get_if<HarmonicCoeffs>(&w); a && a->satisfies_real_symmetry()) a->set_real_field(true);
    }
  }
  return WaveletDecomposition(std::move(bank), mode, std::move(scaling), std::move(wavelets));
}

HarmonicCoeffs synthesize(const WaveletDecomposition& dec) {
  const auto& bank = dec.bank();
  const int bandlimit = bank.bandlimit();
  const auto phi = scaling_spectrum(bank);
  HarmonicCoeffs out(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    const Complex factor = std::sqrt(wigner_norm(l) / (2.0 * kPi)) * phi(l, 0);
    for (int m = -l; m <= l; ++m) out(l, m) = factor * dec.scaling()(l, m);
  }
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    const auto psi = wavelet_spectrum(bank, j);
    if (dec.mode() == TransformMode::kAxisymmetric) {
      const auto& w = dec.axisymmetric(j);
      for (int l = 0; l < bandlimit; ++l) {
        const Complex factor = std::sqrt(2.0 * kPi * wigner_norm(l)) * psi(l, 0);
        if (factor == Complex{}) continue;
        for (int m = -l; m <= l; ++m) out(l, m) += factor * w(l, m);
      }
    } else {
      const auto& w = dec.directional(j);
      for (int l = 0; l < bandlimit; ++l) {
        const double c = wigner_norm(l);
        for (int m = -l; m <= l; ++m) {
          Complex sum{};
          for (int mp = -l; mp <= l; ++mp) sum += w(l, m, mp) * psi(l, mp);
          out(l, m) += c * sum;
        }
      }
    }
  }
  if (out.satisfies_real_symmetry(1e-12) && dec.scaling().real_field()) out.set_real_field(true);
  return out;
}

SphereMap wavelet_coeff_map(const WaveletDecomposition& dec, int j) {
  if (dec.mode() != TransformMode::kAxisymmetric) {
    throw Error(ErrorCode::kModeMismatch, "wavelet maps on the sphere need an axisymmetric decomposition");
  }
  return inverse_sht(dec.axisymmetric(j), make_gauss_legendre_grid(dec.bandlimit()));
}

Complex eval_so3_point(const WignerSpectrum& spectrum, const EulerAngles& rho) {
  const auto big_d = wigner_D_matrices(spectrum.bandlimit(), rho);
  Complex sum{};
  for (int l = 0; l < spectrum.bandlimit(); ++l)
    for (int m = -l; m <= l; ++m)
      for (int mp = -l; mp <= l; ++mp) sum += spectrum(l, m, mp) * std::conj(big_d[l](m + l, mp + l));
  return sum;
}

}  // namespace sphwiener
