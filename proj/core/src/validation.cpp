#include "sphwiener/validation.hpp"

#include <cmath>
#include <memory>

#include "sphwiener/baselines.hpp"
#include "sphwiener/error.hpp"
#include "sphwiener/optimal_filter.hpp"
#include "sphwiener/rng.hpp"
#include "sphwiener/stochastics.hpp"
#include "sphwiener/wavelet_transform.hpp"

namespace sphwiener {

namespace {

InvariantCheck at_most(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

HarmonicCoeffs random_complex(int bandlimit, std::uint64_t seed) {
  HarmonicCoeffs out(bandlimit);
  for (std::size_t i = 0; i < out.size(); ++i) {
    StreamRng rng(seed, i);
    const double re = rng.next_gaussian();
    const double im = rng.next_gaussian();
    out.values()[i] = {re, im};
  }
  return out;
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(int bandlimit, double lambda, int j_min) {
  if (bandlimit < 2) throw Error(ErrorCode::kInvalidBandlimit, "invariant suite needs L >= 2");
  std::vector<InvariantCheck> checks;
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const auto f = random_complex(bandlimit, 1);

  checks.push_back(at_most("sht_roundtrip", max_abs_diff(forward_sht(inverse_sht(f, grid), bandlimit), f), 1e-10));

  const auto bank = std::make_shared<const WaveletBank>(build_bank(bandlimit, lambda, j_min));
  checks.push_back(at_most("admissibility", check_admissibility(*bank), 1e-9));
  checks.push_back(at_most("wavelet_roundtrip", max_abs_diff(synthesize(analyze(f, bank)), f), 1e-8));

  const auto s = synthetic_source(bandlimit, SpectrumLaw::red(2.0), 2);
  const double sigma_sq = sigma_from_input_snr(s, 0.0);
  const auto noisy = s + sample_noise(NoiseModel::white(sigma_sq, 3), bandlimit);
  const auto cs = DegreeCovariance::diagonal(bandlimit, empirical_source_covariance(s).diagonal_values());
  const auto cz = DegreeCovariance::white(bandlimit, sigma_sq);
  const auto matrix = denoise(noisy, cs, cz, *bank, {FilterMode::kMatrix, false});
  const auto closed = denoise(noisy, cs, cz, *bank, {FilterMode::kAxisymClosedForm, false});
  checks.push_back(at_most("matrix_vs_closed_form", max_abs_diff(matrix, closed), 1e-10));

  checks.push_back(at_most("zero_noise_all_pass",
                           max_abs_diff(denoise(noisy, cs, DegreeCovariance(bandlimit), *bank), noisy), 1e-10));

  const auto same = gwks_denoise(noisy, 0.0);
  double bit_diff = 0.0;
  for (std::size_t i = 0; i < same.size(); ++i) {
    if (same.values()[i].real() != noisy.values()[i].real() || same.values()[i].imag() != noisy.values()[i].imag()) {
      bit_diff += 1.0;
    }
  }
  checks.push_back(at_most("gwks_identity_mismatches", bit_diff, 0.0));

  const auto map = inverse_sht(sample_noise(NoiseModel::white(1.0, 4), bandlimit), grid);
  checks.push_back(at_most("real_noise_imag_fraction", map.max_abs_imag() / map.max_abs(), 1e-12));
  return checks;
}

}  // namespace sphwiener
