#include <benchmark/benchmark.h>

#include <memory>

#include "sphwiener/optimal_filter.hpp"
#include "sphwiener/rng.hpp"
#include "sphwiener/stochastics.hpp"
#include "sphwiener/wavelet_transform.hpp"

using namespace sphwiener;

namespace {

HarmonicCoeffs bench_source(int bandlimit) { return synthetic_source(bandlimit, SpectrumLaw::red(2.0), 1); }

void BM_InverseSht(benchmark::State& state) {
  const int bandlimit = static_cast<int>(state.range(0));
  const auto f = bench_source(bandlimit);
  const auto grid = make_gauss_legendre_grid(bandlimit);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_sht(f, grid));
}
BENCHMARK(BM_InverseSht)->Arg(32)->Arg(64)->Arg(128);

void BM_ForwardSht(benchmark::State& state) {
  const int bandlimit = static_cast<int>(state.range(0));
  const auto grid = make_gauss_legendre_grid(bandlimit);
  const auto map = inverse_sht(bench_source(bandlimit), grid);
  for (auto _ : state) benchmark::DoNotOptimize(forward_sht(map, bandlimit));
}
BENCHMARK(BM_ForwardSht)->Arg(32)->Arg(64)->Arg(128);

void BM_BuildBank(benchmark::State& state) {
  const int bandlimit = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_bank(bandlimit, 2.0, 0));
}
BENCHMARK(BM_BuildBank)->Arg(64)->Arg(256);

void BM_AnalyzeSynthesize(benchmark::State& state) {
  const int bandlimit = static_cast<int>(state.range(0));
  const auto bank = std::make_shared<const WaveletBank>(build_bank(bandlimit, 2.0, 0));
  const auto f = bench_source(bandlimit);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(analyze(f, bank)));
}
BENCHMARK(BM_AnalyzeSynthesize)->Arg(64)->Arg(128);

void BM_Denoise(benchmark::State& state) {
  const int bandlimit = static_cast<int>(state.range(0));
  const auto mode = state.range(1) == 0 ? FilterMode::kAxisymClosedForm : FilterMode::kMatrix;
  const auto bank = build_bank(bandlimit, 2.0, 0);
  const auto s = bench_source(bandlimit);
  const double sigma_sq = sigma_from_input_snr(s, 0.0);
  const auto f = s + sample_noise(NoiseModel::white(sigma_sq, derive_seed(1, 2)), bandlimit);
  const auto cs = empirical_source_covariance(s);
  const auto cz = DegreeCovariance::white(bandlimit, sigma_sq);
  for (auto _ : state) benchmark::DoNotOptimize(denoise(f, cs, cz, bank, {mode, false}));
}
BENCHMARK(BM_Denoise)->Args({64, 0})->Args({64, 1});

}  // namespace
BENCHMARK_MAIN();
