#include "sphwiener/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <tuple>

#include "sphwiener/baselines.hpp"
#include "sphwiener/coeff_io.hpp"
#include "sphwiener/error.hpp"
#include "sphwiener/optimal_filter.hpp"
#include "sphwiener/raster.hpp"
#include "sphwiener/rng.hpp"
#include "sphwiener/stochastics.hpp"
#include "sphwiener/wavelet_transform.hpp"

namespace sphwiener {

namespace {

HarmonicCoeffs load_source(const ExperimentConfig& config) {
  if (!config.source_file) return synthetic_source(config.bandlimit, config.source_law, config.source_seed);
  const auto file = read_coeffs_csv(*config.source_file);
  if (file.bandlimit() < config.bandlimit) {
    throw Error(ErrorCode::kConfig, config.source_file->string() + " has bandlimit " +
                                        std::to_string(file.bandlimit()) + " < configured " +
                                        std::to_string(config.bandlimit));
  }
  HarmonicCoeffs out(config.bandlimit);
  std::copy_n(file.values().begin(), out.size(), out.values().begin());
  if (!(out.energy() > 0.0)) throw Error(ErrorCode::kConfig, "source coefficients are all zero");
  if (out.satisfies_real_symmetry()) out.set_real_field(true);
  return out;
}

std::shared_ptr<const WaveletBank> load_bank(const ExperimentConfig& config) {
  auto bank = build_bank(config.bandlimit, config.lambda, config.j1);
  if (config.directionality_file) {
    const auto zeta = read_coeffs_csv(*config.directionality_file);
    if (zeta.bandlimit() != config.bandlimit) {
      throw Error(ErrorCode::kConfig, "directionality bandlimit does not match the configured bandlimit");
    }
    bank = bank.with_directionality(zeta);
  }
  return std::make_shared<const WaveletBank>(std::move(bank));
}

std::string_view filter_mode_name(FilterMode mode) {
  return mode == FilterMode::kMatrix ? "matrix" : "axisym";
}

struct NoisyInput {
  HarmonicCoeffs noise;
  HarmonicCoeffs noisy;
  double sigma_sq;
};

NoisyInput make_noisy(const Scenario& scenario, double snr_in_db, std::uint64_t seed) {
  const double sigma_sq = sigma_from_input_snr(scenario.source, snr_in_db);
  auto noise = sample_noise(NoiseModel::white(sigma_sq, seed, scenario.source.real_field()), scenario.config.bandlimit);
  auto noisy = scenario.source + noise;
  if (scenario.source.real_field() && noisy.satisfies_real_symmetry()) noisy.set_real_field(true);
  return {std::move(noise), std::move(noisy), sigma_sq};
}

HarmonicCoeffs optimal_estimate(const Scenario& scenario, const HarmonicCoeffs& noisy, double sigma_sq) {
  const auto cs = empirical_source_covariance(scenario.source);
  const auto cz = DegreeCovariance::white(scenario.config.bandlimit, sigma_sq);
  auto options = scenario.config.filter;
  if (!scenario.bank->axisymmetric()) options.mode = FilterMode::kMatrix;
  return denoise(noisy, cs, cz, *scenario.bank, options);
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string format_shortest(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

Scenario prepare_scenario(const ExperimentConfig& config) {
  config.validate();
  return Scenario{config, load_source(config), load_bank(config), make_gauss_legendre_grid(config.bandlimit)};
}

std::uint64_t noise_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t realization) {
  return derive_seed(master_seed, snr_index, realization);
}

int thread_count_from_env() {
  const char* raw = std::getenv("SPHWIENER_THREADS");
  int requested = 0;
  if (raw != nullptr && *raw != '\0') {
    const std::string_view text(raw);
    const auto result = std::from_chars(text.data(), text.data() + text.size(), requested);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size() || requested < 0) {
      throw Error(ErrorCode::kConfig, "SPHWIENER_THREADS must be a non-negative integer, got '" + std::string(text) + "'");
    }
  }
  if (requested == 0) requested = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  return requested;
}

RealizationResult run_realization(const Scenario& scenario, std::size_t snr_index, std::size_t realization) {
  const auto& config = scenario.config;
  const double snr_in_db = config.snr_in_db.at(snr_index);
  const auto input = make_noisy(scenario, snr_in_db, noise_seed(config.master_seed, snr_index, realization));

  RealizationResult result;
  result.snr_in_db = snr_db(input.noisy, scenario.source);
  for (const Method method : config.methods) {
    switch (method) {
      case Method::kOptimal: {
        const auto estimate = optimal_estimate(scenario, input.noisy, input.sigma_sq);
        result.scores.push_back({method, std::string(filter_mode_name(config.filter.mode)), 0.0,
                                 snr_db(estimate, scenario.source)});
        break;
      }
      case Method::kThreshold: {
        const auto estimate = hard_threshold_denoise(
            input.noisy, *scenario.bank, {config.threshold_multiplier, input.sigma_sq}, scenario.grid);
        result.scores.push_back({method, format_shortest(config.threshold_multiplier), config.threshold_multiplier,
                                 snr_db(estimate, scenario.source)});
        break;
      }
      case Method::kGwks:
        for (const double kappa : config.kappa_grid) {
          result.scores.push_back(
              {method, format_shortest(kappa), kappa, snr_db(gwks_denoise(input.noisy, kappa), scenario.source)});
        }
        break;
    }
  }
  return result;
}

DenoiseRun run_denoise(const Scenario& scenario, double snr_in_db, std::size_t realization) {
  const auto input = make_noisy(scenario, snr_in_db, noise_seed(scenario.config.master_seed, 0, realization));
  auto estimate = optimal_estimate(scenario, input.noisy, input.sigma_sq);
  const double snr_in_realized = snr_db(input.noisy, scenario.source);
  const double snr_out = snr_db(estimate, scenario.source);
  DenoiseRun run{snr_in_db, realization, snr_in_realized, snr_out, snr_out - snr_in_realized,
                 scenario.source, input.noise, input.noisy, std::move(estimate)};
  return run;
}

void write_denoise_artifacts(const DenoiseRun& run, const SphereGrid& grid, const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  const std::pair<const char*, const HarmonicCoeffs*> maps[] = {
      {"source", &run.source}, {"noise", &run.noise}, {"noisy", &run.noisy}, {"estimate", &run.estimate}};
  for (const auto& [name, coeffs] : maps) {
    auto map = inverse_sht(*coeffs, grid);
    write_map_csv(out_dir / (std::string(name) + "_map.csv"), map);
    if (coeffs->real_field()) {
      // Real fields carry rounding-level imaginary parts only.
      for (auto& v : map.samples()) v = v.real();
    }
    render_map(map, out_dir / (std::string(name) + ".pgm"));
  }
  write_coeffs_csv(out_dir / "estimate_coeffs.csv", run.estimate);

  const auto summary = out_dir / "denoise_summary.csv";
  std::ofstream out(summary, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + summary.string() + " for writing");
  out << "snr_in_db,realization,snr_in_realized_db,snr_out_db,gain_db\n"
      << format_shortest(run.snr_in_db) << ',' << run.realization << ',' << format_shortest(run.snr_in_realized_db)
      << ',' << format_shortest(run.snr_out_db) << ',' << format_shortest(run.gain_db) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + summary.string());
}

std::vector<SweepRow> run_sweep(const Scenario& scenario, int threads) {
  const auto& config = scenario.config;
  const std::size_t n_snr = config.snr_in_db.size();
  const auto n_real = static_cast<std::size_t>(config.n_realizations);
  const std::size_t tasks = n_snr * n_real;
  std::vector<RealizationResult> results(tasks);

  if (threads <= 0) threads = thread_count_from_env();
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(threads), tasks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= tasks) return;
      try {
        results[task] = run_realization(scenario, task / n_real, task % n_real);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < n_snr; ++i) {
    const auto& first = results[i * n_real].scores;
    for (std::size_t k = 0; k < first.size(); ++k) {
      std::vector<double> values;
      for (std::size_t r = 0; r < n_real; ++r) values.push_back(results[i * n_real + r].scores[k].snr_out_db);
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      rows.push_back({config.snr_in_db[i], first[k].method, first[k].param, first[k].order, mean,
                      sample_std(values, mean)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(a.snr_in_db, to_string(a.method), a.order, a.param) <
           std::make_tuple(b.snr_in_db, to_string(b.method), b.order, b.param);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "snr_in_db,method,param,mean_snr_out_db,std_db\n";
  for (const auto& row : rows) {
    out << format_shortest(row.snr_in_db) << ',' << to_string(row.method) << ',' << row.param << ','
        << format_shortest(row.mean_snr_out_db) << ',' << format_shortest(row.std_db) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_sweep_csv(out, rows);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace sphwiener
