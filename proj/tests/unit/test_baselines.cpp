#include <doctest.h>

#include <cmath>
#include <random>

#include "sphwiener/baselines.hpp"
#include "sphwiener/error.hpp"
#include "sphwiener/rng.hpp"
#include "sphwiener/stochastics.hpp"
#include "sphwiener/wavelet_transform.hpp"
#include "test_support.hpp"

using namespace sphwiener;
using sphwiener::testing::random_coeffs;

TEST_CASE("scale noise variance") {
  const auto bank = build_bank(64, 2.0, 0);
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    CHECK(scale_noise_variance(bank, j, 0.0) == 0.0);
    double direct = 0.0;
    for (int l = 0; l < 64; ++l) {
      const double k = bank.kappa(j, l);
      direct += (2 * l + 1) / (8.0 * kPi * kPi) * k * k;
    }
    CHECK(scale_noise_variance(bank, j, 1.0) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(scale_noise_variance(bank, j, 2.5) == doctest::Approx(2.5 * direct).epsilon(1e-13));
  }
  CHECK(scale_noise_variance(bank.without_scale(3), 3, 1.0) == 0.0);
  CHECK_THROWS_AS(scale_noise_variance(bank, 0, -1.0), Error);

  HarmonicCoeffs zeta(64);
  for (int l = 0; l < 64; ++l) zeta(l, l) = 1.0;
  try {
    scale_noise_variance(bank.with_directionality(zeta), 2, 1.0);
    FAIL("expected kModeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kModeMismatch);
  }

  const auto white = DegreeCovariance::white(8, 0.7);
  CHECK(mean_noise_variance(white) == doctest::Approx(0.7));
}

TEST_CASE("scale noise variance matches sample variance of noise maps") {
  const int bandlimit = 16;
  const auto bank = build_bank(bandlimit, 2.0, 0);
  const double sigma_sq = 0.4;
  const int j = 2;
  const int seeds = 400;
  double total = 0.0;
  std::size_t count = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto z = sample_noise(NoiseModel::white(sigma_sq, seed), bandlimit);
    const auto map = wavelet_coeff_map(analyze(z, bank), j);
    for (const auto v : map.samples()) {
      total += v.real() * v.real();
      ++count;
    }
  }
  CHECK(total / count == doctest::Approx(scale_noise_variance(bank, j, sigma_sq)).epsilon(0.05));
}

TEST_CASE("sample thresholding") {
  const auto grid = make_gauss_legendre_grid(4);
  std::vector<Complex> values(grid.sample_count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = Complex(std::sin(1.7 * i), 0.3 * std::cos(i));
  SphereMap map(grid, values);

  auto real_part = map;
  threshold_samples(real_part, 0.5, true);
  auto magnitude = map;
  threshold_samples(magnitude, 0.5, false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Complex v = values[i];
    CHECK(real_part.samples()[i] == (std::abs(v.real()) < 0.5 ? Complex{} : Complex(v.real(), 0.0)));
    CHECK(magnitude.samples()[i] == (std::abs(v) < 0.5 ? Complex{} : v));
  }

  for (bool real : {true, false}) {
    auto once = map;
    threshold_samples(once, 0.5, real);
    auto twice = once;
    threshold_samples(twice, 0.5, real);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(once.samples()[i] == twice.samples()[i]);
  }
}

TEST_CASE("hard thresholding") {
  const int bandlimit = 16;
  const auto bank = build_bank(bandlimit, 2.0, 1);
  const auto f = random_coeffs(bandlimit, 8, true);

  SUBCASE("zero noise keeps the signal") {
    CHECK(max_abs_diff(hard_threshold_denoise(f, bank, {3.0, 0.0}), f) < 1e-8);
  }

  SUBCASE("huge multiplier keeps only the scaling band") {
    const auto out = hard_threshold_denoise(f, bank, {1e12, 1.0});
    const auto phi = scaling_spectrum(bank);
    HarmonicCoeffs expected(bandlimit);
    for (int l = 0; l < bandlimit; ++l) {
      const double eta_sq = bank.eta(l) * bank.eta(l);
      for (int m = -l; m <= l; ++m) expected(l, m) = eta_sq * f(l, m);
    }
    CHECK(max_abs_diff(out, expected) < 1e-12);
    CHECK(phi(0, 0) != Complex{});
  }

  SUBCASE("positive homogeneity with co-scaled threshold") {
    const ThresholdPolicy policy{3.0, 0.2};
    const auto base = hard_threshold_denoise(f, bank, policy);
    for (double a : {0.5, 3.0}) {
      const auto scaled = hard_threshold_denoise(a * f, bank, {3.0, 0.2 * a * a});
      CHECK(max_abs_diff(scaled, a * base) < 1e-10);
    }
  }

  SUBCASE("thresholding twice on wavelet samples") {
    // The samples of a thresholded band are a fixed point of the sample
    // thresholding step.
    const ThresholdPolicy policy{3.0, 0.1};
    const auto grid = make_gauss_legendre_grid(bandlimit);
    const auto dec = analyze(f, bank);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
      const double t = policy.multiplier * std::sqrt(scale_noise_variance(bank, j, policy.sigma_sq));
      auto once = inverse_sht(dec.axisymmetric(j), grid);
      threshold_samples(once, t, true);
      auto twice = once;
      threshold_samples(twice, t, true);
      double worst = 0.0;
      for (std::size_t i = 0; i < once.samples().size(); ++i)
        worst = std::max(worst, std::abs(once.samples()[i] - twice.samples()[i]));
      CHECK(worst < 1e-8);
    }
  }

  SUBCASE("real input gives real output") {
    const auto out = hard_threshold_denoise(f, bank, {3.0, 0.3});
    CHECK(out.real_field());
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(hard_threshold_denoise(f, bank, {0.0, 1.0}), Error);
    CHECK_THROWS_AS(hard_threshold_denoise(f, bank, {3.0, 1.0}, make_gauss_legendre_grid(8)), Error);
  }
}

TEST_CASE("hard thresholding improves low-SNR inputs") {
  const int bandlimit = 32;
  const auto bank = build_bank(bandlimit, 2.0, 0);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  double gain = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = synthetic_source(bandlimit, SpectrumLaw::red(2.0), seed);
    const double sigma_sq = sigma_from_input_snr(s, 0.0);
    const auto f = s + sample_noise(NoiseModel::white(sigma_sq, derive_seed(99, seed)), bandlimit);
    gain += snr_db(hard_threshold_denoise(f, bank, {3.0, sigma_sq}, grid), s) - snr_db(f, s);
  }
  CHECK(gain / 10.0 > 0.0);
}

TEST_CASE("GWKS attenuation") {
  const auto f = random_coeffs(12, 3, true);
  const auto same = gwks_denoise(f, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(same.values()[i].real() == f.values()[i].real());
    CHECK(same.values()[i].imag() == f.values()[i].imag());
  }
  CHECK(same.real_field());

  CHECK(gwks_attenuation(10, 1.0) == doctest::Approx(1.6701e-48).epsilon(1e-4));
  const auto erased = gwks_denoise(f, 1.0);
  CHECK(std::abs(erased(10, 3)) < 1e-46);
  CHECK(erased(0, 0) == f(0, 0));

  for (double kappa : {1e-5, 1e-3, 0.1, 1.0})
    for (int l = 0; l < 200; ++l) {
      const double next = gwks_attenuation(l + 1, kappa);
      if (next > 0.0) {
        CHECK(next < gwks_attenuation(l, kappa));
      } else {
        CHECK(l * (l + 1.0) * kappa > 700.0);
      }
    }

  const auto g = random_coeffs(12, 4, true);
  const auto combined = gwks_denoise(2.0 * f + g, 0.01);
  CHECK(max_abs_diff(combined, 2.0 * gwks_denoise(f, 0.01) + gwks_denoise(g, 0.01)) < 1e-14);

  CHECK_THROWS_AS(gwks_denoise(f, -0.1), Error);
  CHECK_THROWS_AS(gwks_denoise(f, 1.5), Error);
  CHECK_THROWS_AS(gwks_denoise(f, std::nan("")), Error);
}

TEST_CASE("Gauss-Weierstrass kernel") {
  const Direction x{0.7, 1.3};
  CHECK(std::abs(gw_kernel(x, x, 0.0, 2) - Complex(4.0 / (4.0 * kPi), 0.0)) < 1e-14);

  // With kappa = 1 the kernel is the addition theorem sum with weights
  // exp(-l(l+1)); l = 0 alone gives 1 / 4pi.
  const Direction y{2.1, -0.4};
  const double cos_gamma =
      std::cos(x.theta) * std::cos(y.theta) + std::sin(x.theta) * std::sin(y.theta) * std::cos(x.phi - y.phi);
  double addition = 0.0;
  for (int l = 0; l < 10; ++l)
    addition += std::exp(-l * (l + 1.0)) * (2 * l + 1) / (4.0 * kPi) * std::legendre(l, cos_gamma);
  CHECK(std::abs(gw_kernel(x, y, 1.0, 10) - addition) < 1e-13);
  CHECK(std::abs(gw_kernel(x, y, 1.0, 1) - 1.0 / (4.0 * kPi)) < 1e-15);

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> theta(0.0, kPi);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
  for (int i = 0; i < 20; ++i) {
    const Direction a{theta(gen), phi(gen)};
    const Direction b{theta(gen), phi(gen)};
    CHECK(std::abs(gw_kernel(a, b, 0.01, 8) - std::conj(gw_kernel(b, a, 0.01, 8))) < 1e-12);
  }
}

TEST_CASE("GWKS equals the kernel-weighted least-squares estimate") {
  // At each grid point x the weighted squared error sum_y w K(x, y) |f(y) - c|^2
  // is minimized by c = sum w K f / sum w K. The quadrature is exact because
  // K(x, .) f has degree below 2L.
  const int bandlimit = 8;
  const double kappa = 0.03;
  const auto f = random_coeffs(bandlimit, 12, true);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const auto samples = inverse_sht(f, grid);
  SphereMap estimate(grid);
  for (int a = 0; a < grid.n_theta(); ++a)
    for (int b = 0; b < grid.n_phi(); ++b) {
      const Direction x{grid.theta()[a], grid.phi(b)};
      Complex numerator{};
      Complex denominator{};
      for (int c = 0; c < grid.n_theta(); ++c)
        for (int d = 0; d < grid.n_phi(); ++d) {
          const double w = grid.weights()[c] * grid.phi_weight();
          const Complex k = gw_kernel(x, {grid.theta()[c], grid.phi(d)}, kappa, bandlimit);
          numerator += w * k * samples(c, d);
          denominator += w * k;
        }
      estimate(a, b) = numerator / denominator;
    }
  CHECK(max_abs_diff(forward_sht(estimate, bandlimit), gwks_denoise(f, kappa)) < 1e-10);
}
