#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sphwiener/error.hpp"
#include "sphwiener/rng.hpp"
#include "sphwiener/stochastics.hpp"
#include "test_support.hpp"

using namespace sphwiener;
using sphwiener::testing::random_coeffs;

TEST_CASE("counter-based streams") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);

  StreamRng a(42, 7);
  StreamRng b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  StreamRng c(42, 8);
  StreamRng d(43, 7);
  StreamRng e(42, 7);
  int equal_stream = 0;
  int equal_seed = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = e.next_u64();
    equal_stream += x == c.next_u64();
    equal_seed += x == d.next_u64();
  }
  CHECK(equal_stream == 0);
  CHECK(equal_seed == 0);

  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));

  StreamRng u(5, 0);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u.next_uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("polar Gaussians have unit moments") {
  StreamRng rng(9, 1);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_gaussian();
    sum += x;
    sum_sq += x * x;
    sum_4 += x * x * x * x;
  }
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum_4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("sigma from input SNR") {
  HarmonicCoeffs s(4);
  s(1, 0) = 3.0;
  s(2, 1) = Complex(0.0, 4.0);
  CHECK(sigma_from_input_snr(s, 0.0) == doctest::Approx(25.0 / 16.0));
  CHECK(sigma_from_input_snr(s, 10.0) == doctest::Approx(2.5 / 16.0));
  CHECK(sigma_from_input_snr(s, 400.0) < 1e-38);
  try {
    sigma_from_input_snr(HarmonicCoeffs(4), 0.0);
    FAIL("expected kUndefinedSnr");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedSnr);
  }
}

TEST_CASE("noise sampling contracts") {
  CHECK(sample_noise(NoiseModel::white(0.0, 3), 8).max_abs() == 0.0);
  CHECK_THROWS_AS(NoiseModel::white(-1.0, 3), Error);

  const auto a = sample_noise(NoiseModel::white(2.0, 77), 16);
  const auto b = sample_noise(NoiseModel::white(2.0, 77), 16);
  CHECK(max_abs_diff(a, b) == 0.0);
  CHECK(a.real_field());
  CHECK(a.satisfies_real_symmetry());
  CHECK(max_abs_diff(a, sample_noise(NoiseModel::white(2.0, 78), 16)) > 0.0);

  // Sampling at a larger bandlimit extends the draw instead of reshuffling it.
  const auto big = sample_noise(NoiseModel::white(2.0, 77), 20);
  for (int l = 0; l < 16; ++l)
    for (int m = -l; m <= l; ++m) CHECK(big(l, m) == a(l, m));

  const auto map = inverse_sht(a, make_gauss_legendre_grid(16));
  CHECK(map.max_abs_imag() < 1e-12 * map.max_abs());

  CHECK_THROWS_AS(NoiseModel::diagonal({1.0, 1.0, 2.0}, 0), Error);
  CHECK_THROWS_AS(NoiseModel::diagonal({1.0, 1.0, 2.0, 3.0}, 0, true), Error);
  CHECK_NOTHROW(NoiseModel::diagonal({1.0, 1.0, 2.0, 3.0}, 0, false));
  CHECK_THROWS_AS(sample_noise(NoiseModel::diagonal({1.0, 1.0, 2.0, 1.0}, 0), 3), Error);

  std::vector<Eigen::MatrixXcd> blocks{Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(3, 3)};
  const auto full = NoiseModel::full_block(DegreeCovariance(2, blocks), 1);
  CHECK_FALSE(full.real_field());
  CHECK_THROWS_AS(sample_noise(full, 3), Error);
}

TEST_CASE("white noise statistics") {
  const int bandlimit = 16;
  const int seeds = 4000;
  const double sigma_sq = 1.7;
  const std::size_t n = static_cast<std::size_t>(bandlimit) * bandlimit;
  std::vector<double> power(n, 0.0);
  // Cross moments E[z_a conj(z_b)] for a sample of coefficient pairs,
  // including (l, m) against (l, -m), which the real-field symmetry pairs.
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{
      {flat_index(3, 1), flat_index(3, 2)},   {flat_index(3, 1), flat_index(3, -1)},
      {flat_index(5, 0), flat_index(7, 0)},   {flat_index(10, -4), flat_index(2, 2)},
      {flat_index(15, 15), flat_index(15, -15)}, {flat_index(0, 0), flat_index(1, 0)}};
  std::vector<Complex> cross(pairs.size());
  for (int seed = 0; seed < seeds; ++seed) {
    const auto z = sample_noise(NoiseModel::white(sigma_sq, static_cast<std::uint64_t>(seed)), bandlimit);
    for (std::size_t i = 0; i < n; ++i) power[i] += std::norm(z.values()[i]);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      cross[p] += z.values()[pairs[p].first] * std::conj(z.values()[pairs[p].second]);
  }
  // Each estimate is a scaled chi-square mean: relative spread sqrt(2 / n)
  // for real m = 0 draws and sqrt(1 / n) for complex ones. Every coefficient
  // must sit within five of its standard errors, and the pooled estimate
  // within 5%.
  double pooled = 0.0;
  for (int l = 0; l < bandlimit; ++l)
    for (int m = -l; m <= l; ++m) {
      const double estimate = power[flat_index(l, m)] / seeds;
      const double spread = std::sqrt((m == 0 ? 2.0 : 1.0) / seeds);
      CHECK(std::abs(estimate / sigma_sq - 1.0) < 5.0 * spread);
      pooled += estimate / static_cast<double>(n);
    }
  CHECK(std::abs(pooled / sigma_sq - 1.0) < 0.05);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    CHECK(std::abs(cross[p] / double(seeds)) < 4.0 / std::sqrt(double(seeds)) * sigma_sq);
  }
}

TEST_CASE("anisotropic and block noise follow their covariance") {
  const int bandlimit = 3;
  SUBCASE("diagonal") {
    std::vector<double> v(9);
    for (int l = 0; l < bandlimit; ++l)
      for (int m = -l; m <= l; ++m) v[flat_index(l, m)] = 0.5 + l + std::abs(m);
    const auto model = NoiseModel::diagonal(v, 0);
    std::vector<double> power(9, 0.0);
    const int seeds = 4000;
    for (int s = 0; s < seeds; ++s) {
      const auto z = sample_noise(model.with_seed(s), bandlimit);
      for (std::size_t i = 0; i < 9; ++i) power[i] += std::norm(z.values()[i]);
    }
    for (std::size_t i = 0; i < 9; ++i) CHECK(power[i] / seeds == doctest::Approx(v[i]).epsilon(0.06));
    CHECK(model.covariance(bandlimit).diagonal_values() == v);
  }
  SUBCASE("full block") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal;
    std::vector<Eigen::MatrixXcd> blocks;
    for (int l = 0; l < bandlimit; ++l) {
      Eigen::MatrixXcd g(2 * l + 1, 2 * l + 1);
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = {normal(gen), normal(gen)};
      blocks.push_back(g * g.adjoint());
    }
    const DegreeCovariance cov(bandlimit, blocks);
    const auto model = NoiseModel::full_block(cov, 0);
    const int seeds = 20000;
    std::vector<Eigen::MatrixXcd> acc;
    for (int l = 0; l < bandlimit; ++l) acc.emplace_back(Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1));
    for (int s = 0; s < seeds; ++s) {
      const auto z = sample_noise(model.with_seed(s), bandlimit);
      for (int l = 0; l < bandlimit; ++l) {
        Eigen::VectorXcd v(2 * l + 1);
        for (int m = -l; m <= l; ++m) v(m + l) = z(l, m);
        acc[l] += v * v.adjoint();
      }
    }
    for (int l = 0; l < bandlimit; ++l) {
      const double scale = blocks[l].cwiseAbs().maxCoeff();
      CHECK((acc[l] / double(seeds) - blocks[l]).cwiseAbs().maxCoeff() < 0.05 * scale);
    }
  }
}

TEST_CASE("empirical source covariance is rank one") {
  HarmonicCoeffs single(4);
  const Complex v(1.5, -2.0);
  single(2, 1) = v;
  const auto cov = empirical_source_covariance(single);
  const auto& block = cov.block(2);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      const Complex expected = (r == 3 && c == 3) ? Complex(std::norm(v), 0.0) : Complex{};
      CHECK(block(r, c) == expected);
    }

  const auto s = random_coeffs(12, 4);
  const auto full = empirical_source_covariance(s);
  for (int l = 0; l < 12; ++l) {
    for (int m = -l; m <= l; ++m) CHECK(full.variance(l, m) == doctest::Approx(std::norm(s(l, m))));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(full.block(l));
    const auto& values = eig.eigenvalues();
    if (l > 0) CHECK(std::abs(values(values.size() - 2)) < 1e-10 * values(values.size() - 1));
  }
}

TEST_CASE("SNR metric") {
  const auto s = random_coeffs(8, 1);
  const auto e = random_coeffs(8, 2);
  const double ratio = std::sqrt(s.energy() / e.energy());
  CHECK(snr_db(s + ratio * e, s) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(snr_db(s + (ratio / 10.0) * e, s) == doctest::Approx(20.0));
  CHECK(snr_db(s, s) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(snr_db(s, HarmonicCoeffs(8)), Error);
  CHECK_THROWS_AS(snr_db(HarmonicCoeffs(4), s), Error);

  const int bandlimit = 16;
  const auto a = random_coeffs(bandlimit, 3, true);
  const auto b = random_coeffs(bandlimit, 4, true);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const double spatial =
      10.0 * std::log10(inverse_sht(b, grid).energy() / inverse_sht(a - b, grid).energy());
  CHECK(std::abs(snr_db(a, b) - spatial) < 1e-10);
}

TEST_CASE("realized input SNR concentrates on the target") {
  const int bandlimit = 64;
  const auto s = synthetic_source(bandlimit, SpectrumLaw::red(2.0), 1);
  const double target = -0.057;
  const double sigma_sq = sigma_from_input_snr(s, target);
  double sum = 0.0;
  double ratio = 0.0;
  const int seeds = 1000;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto z = sample_noise(NoiseModel::white(sigma_sq, derive_seed(5, seed)), bandlimit);
    sum += snr_db(s + z, s);
    ratio += z.energy() / s.energy();
  }
  CHECK(std::abs(sum / seeds - target) < 0.1);
  CHECK(ratio / seeds == doctest::Approx(std::pow(10.0, 0.0057)).epsilon(0.02));
}

TEST_CASE("synthetic sources") {
  CHECK_THROWS_AS(synthetic_source(1, SpectrumLaw::flat(), 0), Error);
  const auto a = synthetic_source(32, SpectrumLaw::red(2.0), 10);
  CHECK(a.energy() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.real_field());
  CHECK(max_abs_diff(a, synthetic_source(32, SpectrumLaw::red(2.0), 10)) == 0.0);
  CHECK(max_abs_diff(a, synthetic_source(32, SpectrumLaw::red(2.0), 11)) > 0.0);

  const auto red = SpectrumLaw::red(2.0);
  CHECK(red.power(1) / red.power(63) == doctest::Approx(1024.0));
  CHECK(SpectrumLaw::flat().power(5) == 1.0);

  // Averaged per-degree power follows the law.
  const int bandlimit = 16;
  std::vector<double> flat_power(bandlimit, 0.0);
  std::vector<double> red_power(bandlimit, 0.0);
  const int seeds = 2000;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto f = synthetic_source(bandlimit, SpectrumLaw::flat(), seed);
    const auto r = synthetic_source(bandlimit, red, seed);
    for (int l = 0; l < bandlimit; ++l)
      for (int m = -l; m <= l; ++m) {
        flat_power[l] += std::norm(f(l, m)) / (2 * l + 1);
        red_power[l] += std::norm(r(l, m)) / (2 * l + 1);
      }
  }
  for (int l = 1; l < bandlimit; ++l) {
    CHECK(flat_power[l] / flat_power[bandlimit - 1] == doctest::Approx(1.0).epsilon(0.15));
    CHECK(red_power[l] / red_power[bandlimit - 1] ==
          doctest::Approx(red.power(l) / red.power(bandlimit - 1)).epsilon(0.15));
  }
}
