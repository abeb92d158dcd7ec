// sphwiener: command-line front end for the denoising library.
//
//   sphwiener denoise --config <path> [--snr-in-db X] [--seed N] [--out DIR]
//   sphwiener sweep --config <path> [--threads N]
//   sphwiener bank-info [--bandlimit L] [--lambda X] [--j1 J]
//   sphwiener validate [--bandlimit L]
//   sphwiener import-grid --map <map.csv> --bandlimit L --out <coeffs.csv>
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sphwiener/coeff_io.hpp"
#include "sphwiener/config.hpp"
#include "sphwiener/error.hpp"
#include "sphwiener/experiment.hpp"
#include "sphwiener/validation.hpp"
#include "sphwiener/wavelet_bank.hpp"

namespace {

using namespace sphwiener;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<int> bandlimit;
  std::optional<double> lambda;
  std::optional<int> j1;
  std::optional<std::uint64_t> master_seed;
  std::vector<std::string> settings;
};

void add_common(CLI::App& app, CommonOptions& opts) {
  app.add_option("--config", opts.config_path, "Experiment config file (key = value)");
  app.add_option("--bandlimit", opts.bandlimit, "Bandlimit L");
  app.add_option("--lambda", opts.lambda, "Wavelet dilation parameter");
  app.add_option("--j1", opts.j1, "Lowest wavelet scale");
  app.add_option("--master-seed", opts.master_seed, "Master seed for noise streams");
  app.add_option("--set", opts.settings, "Override any config key: --set key=value");
}

ExperimentConfig build_config(const CommonOptions& opts) {
  ExperimentConfig config = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.bandlimit) config.bandlimit = *opts.bandlimit;
  if (opts.lambda) config.lambda = *opts.lambda;
  if (opts.j1) config.j1 = *opts.j1;
  if (opts.master_seed) config.master_seed = *opts.master_seed;
  for (const auto& setting : opts.settings) {
    const auto eq = setting.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, "--set expects key=value, got '" + setting + "'");
    apply_setting(config, setting.substr(0, eq), setting.substr(eq + 1), std::filesystem::current_path());
  }
  config.validate();
  return config;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kIo:
    case ErrorCode::kInvalidBandlimit:
    case ErrorCode::kInvalidOrder:
    case ErrorCode::kInvalidScaleRange:
    case ErrorCode::kInvalidDilation:
    case ErrorCode::kInvalidDirectionality:
    case ErrorCode::kInvalidParameter:
    case ErrorCode::kBandlimitMismatch:
    case ErrorCode::kUndersampledGrid:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

int run_denoise_verb(const CommonOptions& opts, std::optional<double> snr, std::size_t seed,
                     const std::string& out) {
  auto config = build_config(opts);
  if (snr) config.snr_in_db = {*snr};
  if (config.snr_in_db.size() != 1) {
    throw Error(ErrorCode::kConfig, "denoise needs exactly one snr_in_db value (use --snr-in-db)");
  }
  if (!out.empty()) config.out_dir = out;
  const auto scenario = prepare_scenario(config);
  const auto run = run_denoise(scenario, config.snr_in_db.front(), seed);
  write_denoise_artifacts(run, scenario.grid, config.out_dir);
  std::printf("snr_in_db=%s realized=%s snr_out_db=%s gain_db=%s\nwrote %s\n",
              format_shortest(run.snr_in_db).c_str(), format_shortest(run.snr_in_realized_db).c_str(),
              format_shortest(run.snr_out_db).c_str(), format_shortest(run.gain_db).c_str(),
              config.out_dir.string().c_str());
  return 0;
}

int run_sweep_verb(const CommonOptions& opts, int threads) {
  const auto config = build_config(opts);
  const auto scenario = prepare_scenario(config);
  const auto rows = run_sweep(scenario, threads);
  const auto path = config.out_dir / "sweep.csv";
  write_sweep_csv(path, rows);
  std::printf("wrote %s (%zu rows)\n", path.string().c_str(), rows.size());
  return 0;
}

int run_bank_info(const CommonOptions& opts) {
  const auto config = build_config(opts);
  const auto bank = build_bank(config.bandlimit, config.lambda, config.j1);
  std::printf("bandlimit %d\nlambda %s\nj_min %d\nj_max %d\n", bank.bandlimit(),
              format_shortest(bank.dilation()).c_str(), bank.j_min(), bank.j_max());
  std::printf("scaling support: l < %s\n", format_shortest(std::pow(bank.dilation(), bank.j_min())).c_str());
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    int lo = -1;
    int hi = -1;
    for (int l = 0; l < bank.bandlimit(); ++l) {
      if (bank.kappa(j, l) > 0.0) {
        if (lo < 0) lo = l;
        hi = l;
      }
    }
    std::printf("scale %d: degrees %d..%d\n", j, lo, hi);
  }
  std::printf("admissibility deviation %s\n", format_shortest(check_admissibility(bank)).c_str());
  return 0;
}

int run_validate(const CommonOptions& opts) {
  const auto config = build_config(opts);
  bool ok = true;
  for (const auto& check : run_invariant_suite(config.bandlimit, config.lambda, config.j1)) {
    std::printf("%s %s value=%s tolerance=%s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(),
                format_shortest(check.value).c_str(), format_shortest(check.tolerance).c_str());
    ok = ok && check.passed;
  }
  return ok ? 0 : kExitNumerical;
}

int run_import_grid(const std::string& map_path, int bandlimit, const std::string& out) {
  const auto map = read_map_csv(std::filesystem::path(map_path));
  auto coeffs = forward_sht(map, bandlimit);
  if (map.max_abs_imag() <= 1e-12 * map.max_abs() && coeffs.satisfies_real_symmetry()) coeffs.set_real_field(true);
  write_coeffs_csv(std::filesystem::path(out), coeffs);
  std::printf("wrote %s (L = %d)\n", out.c_str(), bandlimit);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal wavelet-domain denoising on the sphere"};
  app.require_subcommand(1);

  CommonOptions denoise_opts;
  std::optional<double> snr;
  std::size_t seed = 0;
  std::string denoise_out;
  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise one noisy realization with the optimal filter");
  add_common(*denoise_cmd, denoise_opts);
  denoise_cmd->add_option("--snr-in-db", snr, "Input SNR in dB");
  denoise_cmd->add_option("--seed", seed, "Realization index for the noise stream");
  denoise_cmd->add_option("--out", denoise_out, "Output directory");

  CommonOptions sweep_opts;
  int threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Output SNR against input SNR for every method");
  add_common(*sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--threads", threads, "Worker threads (0: SPHWIENER_THREADS or all cores)");

  CommonOptions bank_opts;
  auto* bank_cmd = app.add_subcommand("bank-info", "Print the wavelet tiling and its admissibility deviation");
  add_common(*bank_cmd, bank_opts);

  CommonOptions validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite");
  add_common(*validate_cmd, validate_opts);

  std::string map_path;
  int import_bandlimit = 0;
  std::string import_out;
  auto* import_cmd = app.add_subcommand("import-grid", "Convert a Gauss-Legendre map CSV to coefficients");
  import_cmd->add_option("--map", map_path, "Map CSV (theta,phi,re,im)")->required();
  import_cmd->add_option("--bandlimit", import_bandlimit, "Bandlimit L")->required();
  import_cmd->add_option("--out", import_out, "Output coefficient CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*denoise_cmd) return run_denoise_verb(denoise_opts, snr, seed, denoise_out);
    if (*sweep_cmd) return run_sweep_verb(sweep_opts, threads);
    if (*bank_cmd) return run_bank_info(bank_opts);
    if (*validate_cmd) return run_validate(validate_opts);
    if (*import_cmd) return run_import_grid(map_path, import_bandlimit, import_out);
  } catch (const Error& e) {
    std::cerr << "sphwiener: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sphwiener: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
