#include "sphwiener/wavelet_bank.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "sphwiener/error.hpp"
#include "sphwiener/wigner.hpp"

namespace sphwiener {

namespace {

constexpr double kIntegralTolerance = 1e-12;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  // Seed with a few panels so the recursion cannot stop on a coarse
  // coincidence.
  constexpr int kPanels = 8;
  double sum = 0.0;
  const double h = (b - a) / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double x0 = a + p * h;
    const double x1 = (p == kPanels - 1) ? b : x0 + h;
    const double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    sum += simpson_step(f, x0, x1, f0, fm, f1, whole, tol / kPanels, 48);
  }
  return sum;
}

double weighted_bump_squared(double u, double lambda) {
  const double s = tiling::bump(u, lambda);
  return s * s / u;
}

void require_dilation(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidDilation,
                "dilation must be a finite value > 1, got " + std::to_string(lambda));
  }
}

}  // namespace

namespace tiling {

double bump(double t, double lambda) {
  if (t <= 1.0 / lambda || t >= 1.0) return 0.0;
  const double x = 2.0 * lambda * (t - 1.0 / lambda) / (lambda - 1.0) - 1.0;
  const double denom = 1.0 - x * x;
  if (denom <= 0.0) return 0.0;
  return std::exp(-1.0 / denom);
}

double cumulative(double t, double lambda) {
  require_dilation(lambda);
  if (t <= 1.0 / lambda) return 1.0;
  if (t >= 1.0) return 0.0;
  const auto f = [lambda](double u) { return weighted_bump_squared(u, lambda); };
  const double norm = adaptive_simpson(f, 1.0 / lambda, 1.0, kIntegralTolerance);
  return adaptive_simpson(f, t, 1.0, kIntegralTolerance) / norm;
}

double kappa(double t, double lambda) {
  const double diff = cumulative(t / lambda, lambda) - cumulative(t, lambda);
  return diff > 0.0 ? std::sqrt(diff) : 0.0;
}

double eta(double t, double lambda) {
  const double k = cumulative(t, lambda);
  return k > 0.0 ? std::sqrt(k) : 0.0;
}

int max_scale(int bandlimit, double lambda) {
  require_dilation(lambda);
  if (bandlimit < 2) throw Error(ErrorCode::kInvalidBandlimit, "wavelet banks need L >= 2");
  const double target = bandlimit - 1.0;
  int j = 0;
  double power = 1.0;
  while (power < target * (1.0 - 1e-12)) {
    power *= lambda;
    ++j;
  }
  return j;
}

}  // namespace tiling

WaveletBank::WaveletBank(int bandlimit, double lambda, int j_min, int j_max)
    : bandlimit_(bandlimit), dilation_(lambda), j_min_(j_min), j_max_(j_max), zeta_(bandlimit) {}

void WaveletBank::require_scale(int j) const {
  if (j < j_min_ || j > j_max_) {
    throw Error(ErrorCode::kInvalidScaleRange,
                "scale " + std::to_string(j) + " outside [" + std::to_string(j_min_) + ", " +
                    std::to_string(j_max_) + "]");
  }
}

double WaveletBank::kappa(int j, int l) const {
  require_scale(j);
  return kappa_[j - j_min_].at(l);
}

double WaveletBank::eta(int l) const { return eta_.at(l); }

WaveletBank WaveletBank::without_scale(int j) const {
  require_scale(j);
  WaveletBank out = *this;
  std::fill(out.kappa_[j - j_min_].begin(), out.kappa_[j - j_min_].end(), 0.0);
  return out;
}

WaveletBank WaveletBank::with_directionality(const HarmonicCoeffs& zeta) const {
  if (zeta.bandlimit() != bandlimit_) {
    throw Error(ErrorCode::kBandlimitMismatch, "directionality bandlimit " +
                                                   std::to_string(zeta.bandlimit()) +
                                                   " != bank bandlimit " + std::to_string(bandlimit_));
  }
  bool axisymmetric = true;
  for (int l = 0; l < bandlimit_; ++l) {
    double row = 0.0;
    for (int m = -l; m <= l; ++m) {
      row += std::norm(zeta(l, m));
      if (m != 0 && zeta(l, m) != Complex{}) axisymmetric = false;
    }
    if (row != 0.0 && std::abs(row - 1.0) > 1e-10) {
      throw Error(ErrorCode::kInvalidDirectionality,
                  "sum_m |zeta_{l,m}|^2 = " + std::to_string(row) + " at l = " + std::to_string(l) +
                      ", expected 1");
    }
  }
  WaveletBank out = *this;
  out.zeta_ = zeta;
  out.axisymmetric_ = axisymmetric;
  return out;
}

WaveletBank build_bank(int bandlimit, double lambda, int j_min) {
  require_dilation(lambda);
  if (bandlimit < 2) throw Error(ErrorCode::kInvalidBandlimit, "wavelet banks need L >= 2");
  const int j_max = tiling::max_scale(bandlimit, lambda);
  if (j_min < 0 || j_min > j_max) {
    throw Error(ErrorCode::kInvalidScaleRange, "j_min = " + std::to_string(j_min) +
                                                   " must lie in [0, " + std::to_string(j_max) + "]");
  }

  WaveletBank bank(bandlimit, lambda, j_min, j_max);

  // k(l / lambda^j) for j = j_min .. j_max + 1, shared between neighbouring
  // scales so the telescoping identity holds to roundoff.
  std::vector<std::vector<double>> k_table;
  for (int j = j_min; j <= j_max + 1; ++j) {
    const double scale = std::pow(lambda, j);
    std::vector<double> row(bandlimit);
    for (int l = 0; l < bandlimit; ++l) row[l] = tiling::cumulative(l / scale, lambda);
    k_table.push_back(std::move(row));
  }

  bank.eta_.resize(bandlimit);
  for (int l = 0; l < bandlimit; ++l) bank.eta_[l] = std::sqrt(std::max(k_table[0][l], 0.0));
  for (int j = j_min; j <= j_max; ++j) {
    std::vector<double> row(bandlimit);
    for (int l = 0; l < bandlimit; ++l) {
      const double diff = k_table[j - j_min + 1][l] - k_table[j - j_min][l];
      row[l] = diff > 0.0 ? std::sqrt(diff) : 0.0;
    }
    bank.kappa_.push_back(std::move(row));
  }
  for (int l = 0; l < bandlimit; ++l) bank.zeta_(l, 0) = 1.0;
  return bank;
}

HarmonicCoeffs wavelet_spectrum(const WaveletBank& bank, int j) {
  HarmonicCoeffs out(bank.bandlimit());
  for (int l = 0; l < bank.bandlimit(); ++l) {
    const double k = bank.kappa(j, l);
    if (k == 0.0) continue;
    const double scale = k / std::sqrt(wigner_norm(l));
    for (int m = -l; m <= l; ++m) out(l, m) = scale * bank.zeta(l, m);
  }
  return out;
}

HarmonicCoeffs scaling_spectrum(const WaveletBank& bank) {
  HarmonicCoeffs out(bank.bandlimit());
  for (int l = 0; l < bank.bandlimit(); ++l) {
    out(l, 0) = std::sqrt(2.0 * kPi / wigner_norm(l)) * bank.eta(l);
  }
  return out;
}

double check_admissibility(const WaveletBank& bank) {
  const auto phi = scaling_spectrum(bank);
  std::vector<HarmonicCoeffs> psi;
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) psi.push_back(wavelet_spectrum(bank, j));
  double worst = 0.0;
  for (int l = 0; l < bank.bandlimit(); ++l) {
    double sum = std::norm(phi(l, 0)) / (2.0 * kPi);
    for (const auto& p : psi)
      for (int m = -l; m <= l; ++m) sum += std::norm(p(l, m));
    worst = std::max(worst, std::abs(wigner_norm(l) * sum - 1.0));
  }
  return worst;
}

}  // namespace sphwiener
