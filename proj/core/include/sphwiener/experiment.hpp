#pragma once

// Experiment harness: single-realization denoising runs and SNR sweeps over
// the optimal filter, hard thresholding and GWKS.
//
// Realization r at SNR index i draws its noise from seed
// derive_seed(master_seed, i, r), so adding methods or threads never changes
// a draw. Sweep rows are sorted by (snr_in_db, method, parameter).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sphwiener/config.hpp"
#include "sphwiener/harmonic.hpp"
#include "sphwiener/wavelet_bank.hpp"

namespace sphwiener {

/// Read-only inputs shared by every realization of a run.
struct Scenario {
  ExperimentConfig config;
  HarmonicCoeffs source;
  std::shared_ptr<const WaveletBank> bank;
  SphereGrid grid;
};

/// Loads the source (file, truncated to the configured bandlimit, or the
/// synthetic law) and builds the bank.
Scenario prepare_scenario(const ExperimentConfig& config);

std::uint64_t noise_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t realization);

/// Worker count from SPHWIENER_THREADS: unset or 0 means the hardware
/// concurrency; anything else that is not a non-negative integer throws
/// kConfig.
int thread_count_from_env();

struct MethodScore {
  Method method;
  /// Filter mode, threshold multiplier or kappa, as printed in the CSV.
  std::string param;
  /// Numeric sort key within a method (kappa or multiplier; 0 otherwise).
  double order;
  double snr_out_db;
};

struct RealizationResult {
  double snr_in_db = 0.0;
  std::vector<MethodScore> scores;
};

/// Runs every configured method on one noisy realization.
RealizationResult run_realization(const Scenario& scenario, std::size_t snr_index, std::size_t realization);

struct DenoiseRun {
  double snr_in_db = 0.0;
  std::size_t realization = 0;
  double snr_in_realized_db = 0.0;
  double snr_out_db = 0.0;
  double gain_db = 0.0;
  HarmonicCoeffs source;
  HarmonicCoeffs noise;
  HarmonicCoeffs noisy;
  HarmonicCoeffs estimate;
};

/// Optimal-filter run at one input SNR (noise seed index 0, `realization`).
DenoiseRun run_denoise(const Scenario& scenario, double snr_in_db, std::size_t realization);

/// Writes map CSVs, PGM rasters, estimate coefficients and a one-row
/// summary into `out_dir` (created if needed).
void write_denoise_artifacts(const DenoiseRun& run, const SphereGrid& grid, const std::filesystem::path& out_dir);

struct SweepRow {
  double snr_in_db;
  Method method;
  std::string param;
  double order;
  double mean_snr_out_db;
  double std_db;
};

/// Full sweep over snr_in_db x realizations with `threads` workers
/// (0 means thread_count_from_env()).
std::vector<SweepRow> run_sweep(const Scenario& scenario, int threads = 0);

/// CSV `snr_in_db,method,param,mean_snr_out_db,std_db`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal form of a double.
std::string format_shortest(double value);

}  // namespace sphwiener
