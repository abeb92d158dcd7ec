#include "sphwiener/stochastics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sphwiener/error.hpp"
#include "sphwiener/rng.hpp"

namespace sphwiener {

namespace {

constexpr std::uint64_t kSourceDomain = 0x736F75726365ULL;

double sign_of_order(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Fills `out` with independent Gaussians of variance variance(l, m); real
// fields get the conjugate-symmetric construction.
template <typename VarianceFn>
void fill_gaussian(HarmonicCoeffs& out, std::uint64_t seed, bool real_field, VarianceFn variance) {
  const int bandlimit = out.bandlimit();
  for (int l = 0; l < bandlimit; ++l) {
    for (int m = real_field ? 0 : -l; m <= l; ++m) {
      StreamRng rng(seed, flat_index(l, m));
      const double v = variance(l, m);
      if (real_field && m == 0) {
        out(l, 0) = std::sqrt(v) * rng.next_gaussian();
        continue;
      }
      const double sd = std::sqrt(0.5 * v);
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      out(l, m) = {sd * re, sd * im};
      if (real_field) out(l, -m) = sign_of_order(m) * std::conj(out(l, m));
    }
  }
  if (real_field) out.set_real_field(true);
}

void check_variance(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kNegativeVariance, "noise variance must be finite and >= 0");
  }
}

}  // namespace

NoiseModel NoiseModel::white(double sigma_sq, std::uint64_t seed, bool real_field) {
  check_variance(sigma_sq);
  NoiseModel model;
  model.kind_ = NoiseKind::kWhiteDiagonal;
  model.sigma_sq_ = sigma_sq;
  model.seed_ = seed;
  model.real_field_ = real_field;
  return model;
}

NoiseModel NoiseModel::diagonal(std::vector<double> variances, std::uint64_t seed, bool real_field) {
  const auto bandlimit = static_cast<int>(std::lround(std::sqrt(static_cast<double>(variances.size()))));
  if (variances.empty() || static_cast<std::size_t>(bandlimit) * bandlimit != variances.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "variance count must be a perfect square");
  }
  for (double v : variances) check_variance(v);
  if (real_field) {
    for (int l = 0; l < bandlimit; ++l)
      for (int m = 1; m <= l; ++m)
        if (variances[flat_index(l, m)] != variances[flat_index(l, -m)]) {
          throw Error(ErrorCode::kInvalidParameter,
                      "real-field noise needs equal variances at (l, m) and (l, -m)");
        }
  }
  NoiseModel model;
  model.kind_ = NoiseKind::kDiagonalAnisotropic;
  model.variances_ = std::move(variances);
  model.seed_ = seed;
  model.real_field_ = real_field;
  return model;
}

NoiseModel NoiseModel::full_block(DegreeCovariance blocks, std::uint64_t seed) {
  NoiseModel model;
  model.kind_ = NoiseKind::kFullBlock;
  model.blocks_ = std::move(blocks);
  model.seed_ = seed;
  model.real_field_ = false;
  return model;
}

NoiseModel NoiseModel::with_seed(std::uint64_t seed) const {
  NoiseModel copy = *this;
  copy.seed_ = seed;
  return copy;
}

DegreeCovariance NoiseModel::covariance(int bandlimit) const {
  switch (kind_) {
    case NoiseKind::kWhiteDiagonal:
      return DegreeCovariance::white(bandlimit, sigma_sq_);
    case NoiseKind::kDiagonalAnisotropic:
      if (variances_.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
        throw Error(ErrorCode::kBandlimitMismatch, "noise model variances do not match bandlimit");
      }
      return DegreeCovariance::diagonal(bandlimit, variances_);
    case NoiseKind::kFullBlock:
      if (blocks_->bandlimit() != bandlimit) {
        throw Error(ErrorCode::kBandlimitMismatch, "noise model blocks do not match bandlimit");
      }
      return *blocks_;
  }
  return DegreeCovariance(bandlimit);
}

double sigma_from_input_snr(const HarmonicCoeffs& s, double snr_in_db) {
  const double energy = s.energy();
  if (!(energy > 0.0)) throw Error(ErrorCode::kUndefinedSnr, "input SNR is undefined for a zero signal");
  const double l = s.bandlimit();
  return std::pow(10.0, -snr_in_db / 10.0) * energy / (l * l);
}

HarmonicCoeffs sample_noise(const NoiseModel& model, int bandlimit) {
  HarmonicCoeffs out(bandlimit);
  switch (model.kind_) {
    case NoiseKind::kWhiteDiagonal:
      fill_gaussian(out, model.seed_, model.real_field_, [&](int, int) { return model.sigma_sq_; });
      break;
    case NoiseKind::kDiagonalAnisotropic: {
      if (model.variances_.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
        throw Error(ErrorCode::kBandlimitMismatch, "noise model variances do not match bandlimit");
      }
      fill_gaussian(out, model.seed_, model.real_field_,
                    [&](int l, int m) { return model.variances_[flat_index(l, m)]; });
      break;
    }
    case NoiseKind::kFullBlock: {
      const auto& cov = *model.blocks_;
      if (cov.bandlimit() != bandlimit) {
        throw Error(ErrorCode::kBandlimitMismatch, "noise model blocks do not match bandlimit");
      }
      for (int l = 0; l < bandlimit; ++l) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov.block(l));
        if (eig.info() != Eigen::Success) throw Error(ErrorCode::kNumerical, "eigendecomposition failed");
        const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        StreamRng rng(model.seed_, static_cast<std::uint64_t>(l));
        Eigen::VectorXcd w(2 * l + 1);
        const double sd = std::sqrt(0.5);
        for (int i = 0; i < 2 * l + 1; ++i) {
          const double re = rng.next_gaussian();
          const double im = rng.next_gaussian();
          w(i) = {sd * re, sd * im};
        }
        const Eigen::VectorXcd z = eig.eigenvectors() * root.asDiagonal() * w;
        for (int m = -l; m <= l; ++m) out(l, m) = z(m + l);
      }
      break;
    }
  }
  return out;
}

DegreeCovariance empirical_source_covariance(const HarmonicCoeffs& s) {
  const int bandlimit = s.bandlimit();
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    Eigen::VectorXcd v(2 * l + 1);
    for (int m = -l; m <= l; ++m) v(m + l) = s(l, m);
    blocks.emplace_back(v * v.adjoint());
  }
  return DegreeCovariance(bandlimit, std::move(blocks), DegreeCovariance::Unchecked{});
}

double snr_db(const HarmonicCoeffs& d, const HarmonicCoeffs& s) {
  if (d.bandlimit() != s.bandlimit()) {
    throw Error(ErrorCode::kBandlimitMismatch, "snr_db: bandlimits differ");
  }
  const double signal = s.energy();
  if (!(signal > 0.0)) throw Error(ErrorCode::kUndefinedSnr, "SNR is undefined for a zero source");
  const double error = (d - s).energy();
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double SpectrumLaw::power(int l) const {
  if (kind == Kind::kFlat) return 1.0;
  return std::pow(static_cast<double>(l) + 1.0, -exponent);
}

HarmonicCoeffs synthetic_source(int bandlimit, const SpectrumLaw& law, std::uint64_t seed) {
  if (bandlimit < 2) throw Error(ErrorCode::kInvalidBandlimit, "synthetic source needs L >= 2");
  HarmonicCoeffs out(bandlimit);
  fill_gaussian(out, derive_seed(seed, kSourceDomain), true, [&](int l, int) { return law.power(l); });
  const double energy = out.energy();
  if (!(energy > 0.0)) throw Error(ErrorCode::kNumerical, "synthetic source has zero energy");
  out *= 1.0 / std::sqrt(energy);
  out.set_real_field(true);
  return out;
}

}  // namespace sphwiener
