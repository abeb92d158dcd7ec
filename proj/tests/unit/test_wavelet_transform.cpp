#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "sphwiener/error.hpp"
#include "sphwiener/wavelet_transform.hpp"
#include "test_support.hpp"

using namespace sphwiener;
using sphwiener::testing::random_coeffs;

namespace {

std::shared_ptr<const WaveletBank> shared(WaveletBank bank) {
  return std::make_shared<const WaveletBank>(std::move(bank));
}

// Unit-norm directionality with a random sparse support per degree.
HarmonicCoeffs random_directionality(int bandlimit, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(0.5);
  HarmonicCoeffs zeta(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    double norm = 0.0;
    for (int m = -l; m <= l; ++m) {
      if (m == 0 || keep(gen)) zeta(l, m) = {normal(gen), normal(gen)};
      norm += std::norm(zeta(l, m));
    }
    for (int m = -l; m <= l; ++m) zeta(l, m) /= std::sqrt(norm);
  }
  return zeta;
}

double max_diff(const WaveletDecomposition& a, const WaveletDecomposition& b) {
  double worst = max_abs_diff(a.scaling(), b.scaling());
  for (int j = a.bank().j_min(); j <= a.bank().j_max(); ++j) {
    if (a.mode() == TransformMode::kAxisymmetric) {
      worst = std::max(worst, max_abs_diff(a.axisymmetric(j), b.axisymmetric(j)));
    } else {
      const auto va = a.directional(j).values();
      const auto vb = b.directional(j).values();
      for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("WignerSpectrum layout") {
  WignerSpectrum w(4);
  CHECK(w.size() == 1 + 9 + 25 + 49);
  CHECK(WignerSpectrum::offset(2) == 10);
  w(2, -1, 2) = {1.0, 2.0};
  const auto b = w.block(2);
  CHECK(b(1, 4) == Complex(1.0, 2.0));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(5, 5, Complex(3.0, 0.0));
  w.set_block(2, m);
  CHECK(w(2, 2, -2) == Complex(3.0, 0.0));
  CHECK_THROWS_AS(w.set_block(1, m), Error);
}

TEST_CASE("analyze trivial cases") {
  const auto bank = shared(build_bank(16, 2.0, 0));
  const auto zero = analyze(HarmonicCoeffs(16), bank);
  CHECK(zero.scaling().max_abs() == 0.0);
  for (int j = 0; j <= bank->j_max(); ++j) CHECK(zero.axisymmetric(j).max_abs() == 0.0);

  HarmonicCoeffs mono(16);
  mono(0, 0) = 2.5;
  const auto dec = analyze(mono, bank);
  for (int j = 0; j <= bank->j_max(); ++j) CHECK(dec.axisymmetric(j).max_abs() == 0.0);
  CHECK(std::abs(synthesize(dec)(0, 0) - 2.5) < 1e-14);

  CHECK_THROWS_AS(analyze(HarmonicCoeffs(17), bank), Error);
  CHECK_THROWS_AS(dec.directional(0), Error);
  // A smaller signal is zero-padded.
  const auto small = random_coeffs(9, 3);
  const auto back = synthesize(analyze(small, bank));
  CHECK(back.bandlimit() == 16);
  for (int l = 0; l < 9; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(back(l, m) - small(l, m)) < 1e-12);
}

TEST_CASE("axisymmetric coefficients equal spatial inner products with rotated wavelets") {
  const int bandlimit = 16;
  const auto bank = shared(build_bank(bandlimit, 2.0, 1));
  const auto f = random_coeffs(bandlimit, 8);
  const auto dec = analyze(f, bank);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const auto f_map = inverse_sht(f, grid);

  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> theta(0.0, kPi), phi(0.0, 2 * kPi);
  for (int j = bank->j_min(); j <= bank->j_max(); ++j) {
    const auto psi = wavelet_spectrum(*bank, j);
    for (int trial = 0; trial < 3; ++trial) {
      const double t = theta(gen), p = phi(gen);
      const auto rotated = inverse_sht(rotate_coeffs(psi, EulerAngles(p, t, 0.0)), grid);
      const Complex quadrature = inner_product(f_map, rotated);
      Complex spectral{};
      for (int l = 0; l < bandlimit; ++l)
        for (int m = -l; m <= l; ++m) spectral += dec.axisymmetric(j)(l, m) * ylm(l, m, t, p);
      CHECK(std::abs(quadrature - spectral) < 1e-10);
    }
  }
  // Scaling coefficients against the rotated scaling function.
  const auto phi_spec = scaling_spectrum(*bank);
  const auto rotated = inverse_sht(rotate_coeffs(phi_spec, EulerAngles(0.4, 1.1, 0.0)), grid);
  Complex spectral{};
  for (int l = 0; l < bandlimit; ++l)
    for (int m = -l; m <= l; ++m) spectral += dec.scaling()(l, m) * ylm(l, m, 1.1, 0.4);
  CHECK(std::abs(inner_product(f_map, rotated) - spectral) < 1e-10);
}

TEST_CASE("directional coefficients equal spatial inner products on SO(3)") {
  const int bandlimit = 12;
  const auto bank = shared(build_bank(bandlimit, 2.0, 0).with_directionality(random_directionality(bandlimit, 5)));
  const auto f = random_coeffs(bandlimit, 9);
  const auto dec = analyze(f, bank);
  CHECK(dec.mode() == TransformMode::kDirectional);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const auto f_map = inverse_sht(f, grid);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi), theta(0.0, kPi);
  for (int j = bank->j_min(); j <= bank->j_max(); ++j) {
    const auto psi = wavelet_spectrum(*bank, j);
    for (int trial = 0; trial < 2; ++trial) {
      const EulerAngles rho(angle(gen), theta(gen), angle(gen));
      const auto rotated = inverse_sht(rotate_coeffs(psi, rho), grid);
      CHECK(std::abs(inner_product(f_map, rotated) - eval_so3_point(dec.directional(j), rho)) < 1e-10);
    }
  }
}

TEST_CASE("perfect reconstruction") {
  SUBCASE("axisymmetric default bank at L = 64") {
    const auto bank = shared(build_bank(64, 2.0, 0));
    const auto f = random_coeffs(64, 64);
    CHECK(max_abs_diff(synthesize(analyze(f, bank)), f) < 1e-8);
  }
  SUBCASE("user directionality at L = 16") {
    const auto bank = shared(build_bank(16, 2.0, 0).with_directionality(random_directionality(16, 6)));
    const auto f = random_coeffs(16, 16);
    CHECK(max_abs_diff(synthesize(analyze(f, bank)), f) < 1e-8);
  }
  SUBCASE("directional mode on an axisymmetric bank") {
    const auto bank = shared(build_bank(16, 3.0, 1));
    const auto f = random_coeffs(16, 1);
    const auto dec = analyze(f, bank, TransformMode::kDirectional);
    CHECK(max_abs_diff(synthesize(dec), f) < 1e-8);
  }
  SUBCASE("holds for every admissible bank and fails for the broken one") {
    for (int bandlimit : {2, 8, 32}) {
      for (double lambda : {2.0, 3.0}) {
        const auto bank = build_bank(bandlimit, lambda, 0);
        const auto f = random_coeffs(bandlimit, bandlimit * 7);
        CHECK(max_abs_diff(synthesize(analyze(f, bank)), f) < 1e-8);
      }
    }
    const auto full = build_bank(32, 2.0, 0);
    const auto broken = shared(full.without_scale(3));
    const auto f = random_coeffs(32, 12);
    CHECK(check_admissibility(*broken) > 0.5);
    CHECK(max_abs_diff(synthesize(analyze(f, broken)), f) > 1e-2);
  }
}

TEST_CASE("energy split and linearity") {
  for (bool directional : {false, true}) {
    auto base = build_bank(32, 2.0, 1);
    if (directional) base = base.with_directionality(random_directionality(32, 44));
    const auto bank = shared(base);
    const auto f = random_coeffs(32, 31);
    const auto dec = analyze(f, bank);
    double total = dec.scaling_energy();
    for (int j = bank->j_min(); j <= bank->j_max(); ++j) total += dec.wavelet_energy(j);
    CHECK(std::abs(total - f.energy()) < 1e-9 * f.energy());

    const auto g = random_coeffs(32, 32);
    const Complex a{0.7, -0.2};
    const double b = -1.3;
    const auto lhs = analyze(a * f + b * g, bank);
    auto rhs_f = analyze(f, bank);
    const auto rhs_g = analyze(g, bank);
    // Build a*dec(f) + b*dec(g) by hand.
    rhs_f.scaling() = a * rhs_f.scaling() + b * rhs_g.scaling();
    for (int j = bank->j_min(); j <= bank->j_max(); ++j) {
      if (directional) {
        auto& w = rhs_f.directional(j);
        const auto& v = rhs_g.directional(j);
        for (std::size_t i = 0; i < w.size(); ++i) w.values()[i] = a * w.values()[i] + b * v.values()[i];
      } else {
        rhs_f.axisymmetric(j) = a * rhs_f.axisymmetric(j) + b * rhs_g.axisymmetric(j);
      }
    }
    CHECK(max_diff(lhs, rhs_f) < 1e-13);
  }
}

TEST_CASE("wavelet coefficient maps") {
  const auto bank = shared(build_bank(16, 2.0, 0));
  HarmonicCoeffs low(16);
  low(0, 0) = 1.0;
  // kappa_j vanishes at l = 0, so every scale map is zero.
  const auto dec_low = analyze(low, bank);
  CHECK(wavelet_coeff_map(dec_low, 2).max_abs() == 0.0);

  const auto f = random_coeffs(16, 2, true);
  const auto dec = analyze(f, bank);
  for (int j = 0; j <= bank->j_max(); ++j) {
    const auto map = wavelet_coeff_map(dec, j);
    const double norm = std::sqrt(map.energy());
    CHECK(map.max_abs_imag() <= 1e-10 * std::max(norm, 1e-300));
    CHECK(std::abs(map.energy() - dec.axisymmetric(j).energy()) <= 1e-10 * std::max(map.energy(), 1e-300));
  }
  const auto directional = analyze(f, bank, TransformMode::kDirectional);
  try {
    (void)wavelet_coeff_map(directional, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kModeMismatch);
  }
}

TEST_CASE("eval_so3_point") {
  WignerSpectrum zero(4);
  CHECK(eval_so3_point(zero, EulerAngles(0.3, 0.2, 0.1)) == Complex{});
  WignerSpectrum single(3);
  single(1, 0, 0) = 1.0;
  CHECK(std::abs(eval_so3_point(single, EulerAngles(0, 0, 0)) - 1.0) < 1e-15);

  // Roundtrip through SO(3) quadrature at L = 8.
  const int bandlimit = 8;
  WignerSpectrum spectrum(bandlimit);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  for (auto& v : spectrum.values()) v = {normal(gen), normal(gen)};

  const auto g = make_gauss_legendre_grid(bandlimit);
  const int n_az = 2 * bandlimit - 1;
  const double az = 2 * kPi / n_az;
  WignerSpectrum recovered(bandlimit);
  for (int i = 0; i < g.n_theta(); ++i) {
    for (int a = 0; a < n_az; ++a) {
      for (int c = 0; c < n_az; ++c) {
        const EulerAngles rho(a * az, g.theta()[i], c * az);
        const Complex value = eval_so3_point(spectrum, rho);
        const auto big_d = wigner_D_matrices(bandlimit, rho);
        const double w = g.weights()[i] * az * az;
        for (int l = 0; l < bandlimit; ++l)
          for (int m = -l; m <= l; ++m)
            for (int mp = -l; mp <= l; ++mp)
              recovered(l, m, mp) += w * value * big_d[l](m + l, mp + l) / wigner_norm(l);
      }
    }
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    worst = std::max(worst, std::abs(recovered.values()[k] - spectrum.values()[k]));
  CHECK(worst < 1e-10);
}
