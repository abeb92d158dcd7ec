#pragma once

// Experiment configuration in a flat `key = value` text format. Lists are
// comma-separated, `#` starts a comment, and units are part of key names
// (snr_in_db). Relative paths resolve against the config file's directory.
//
// Keys:
//   bandlimit, lambda, j1, directionality_file,
//   source_file | source_law (red | flat), source_exponent, source_seed,
//   snr_in_db, n_realizations, methods (optimal, threshold, gwks),
//   kappa_grid, threshold_multiplier, filter_mode (axisym | matrix),
//   filter_scaling (true | false), out_dir, master_seed

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphwiener/optimal_filter.hpp"
#include "sphwiener/stochastics.hpp"

namespace sphwiener {

enum class Method { kOptimal, kThreshold, kGwks };

std::string_view to_string(Method method) noexcept;

/// 21 points from -7 to 13 dB.
std::vector<double> default_snr_grid();
/// 0 followed by 17 log-spaced values from 1e-5 to 1.
std::vector<double> default_kappa_grid();

struct ExperimentConfig {
  int bandlimit = 64;
  double lambda = 2.0;
  int j1 = 0;
  std::optional<std::filesystem::path> directionality_file;

  std::optional<std::filesystem::path> source_file;
  SpectrumLaw source_law = SpectrumLaw::red(2.0);
  std::uint64_t source_seed = 1;

  std::vector<double> snr_in_db = default_snr_grid();
  int n_realizations = 10;
  std::vector<Method> methods{Method::kOptimal, Method::kThreshold, Method::kGwks};
  std::vector<double> kappa_grid = default_kappa_grid();
  double threshold_multiplier = 3.0;
  DenoiseOptions filter;

  std::filesystem::path out_dir = "out";
  std::uint64_t master_seed = 0;

  /// Checks the invariants (n_realizations >= 1, non-empty SNR list and
  /// method list, kappa in [0, 1], existing input files, ...); throws kConfig.
  void validate() const;
};

/// Applies one `key = value` assignment; unknown keys and malformed values
/// throw kConfig. `base_dir` anchors relative paths.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
/// Parses and validates; I/O problems throw kConfig with the path.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sphwiener
