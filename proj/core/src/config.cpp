#include "sphwiener/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "sphwiener/error.hpp"

namespace sphwiener {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::kConfig,
              std::string(key) + ": cannot read '" + std::string(value) + "' as " + std::string(expected));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto* end = value.data() + value.size();
  auto result = std::from_chars(value.data(), end, out);
  if (result.ec != std::errc() || result.ptr != end) {
    bad_value(key, value, std::is_integral_v<T> ? "an integer" : "a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) bad_value(key, value, "a finite number");
  }
  return out;
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

std::vector<double> parse_number_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto item : split_list(value)) out.push_back(parse_number<double>(key, item));
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "a boolean");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kConfig, message);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kOptimal: return "optimal";
    case Method::kThreshold: return "threshold";
    case Method::kGwks: return "gwks";
  }
  return "unknown";
}

std::vector<double> default_snr_grid() {
  std::vector<double> grid;
  for (int i = -7; i <= 13; ++i) grid.push_back(i);
  return grid;
}

std::vector<double> default_kappa_grid() {
  std::vector<double> grid{0.0};
  for (int i = 0; i < 17; ++i) grid.push_back(std::pow(10.0, -5.0 + 5.0 * i / 16.0));
  grid.back() = 1.0;
  return grid;
}

void ExperimentConfig::validate() const {
  require(bandlimit >= 2, "bandlimit must be >= 2");
  require(lambda > 1.0, "lambda must be > 1");
  require(j1 >= 0, "j1 must be >= 0");
  require(n_realizations >= 1, "n_realizations must be >= 1");
  require(!snr_in_db.empty(), "snr_in_db must list at least one value");
  require(!methods.empty(), "methods must list at least one method");
  for (double k : kappa_grid) require(k >= 0.0 && k <= 1.0, "kappa_grid values must lie in [0, 1]");
  if (std::find(methods.begin(), methods.end(), Method::kGwks) != methods.end()) {
    require(!kappa_grid.empty(), "kappa_grid must be non-empty when gwks is selected");
  }
  require(threshold_multiplier > 0.0, "threshold_multiplier must be positive");
  if (source_file) require(std::filesystem::is_regular_file(*source_file), "source_file not found: " + source_file->string());
  if (directionality_file) {
    require(std::filesystem::is_regular_file(*directionality_file),
            "directionality_file not found: " + directionality_file->string());
  }
  require(source_law.kind == SpectrumLaw::Kind::kFlat || std::isfinite(source_law.exponent),
          "source_exponent must be finite");
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  key = trim(key);
  value = trim(value);
  if (key == "bandlimit") {
    config.bandlimit = parse_number<int>(key, value);
  } else if (key == "lambda") {
    config.lambda = parse_number<double>(key, value);
  } else if (key == "j1") {
    config.j1 = parse_number<int>(key, value);
  } else if (key == "directionality_file") {
    config.directionality_file = value.empty() ? std::nullopt : std::optional(resolve(base_dir, value));
  } else if (key == "source_file") {
    config.source_file = value.empty() ? std::nullopt : std::optional(resolve(base_dir, value));
  } else if (key == "source_law") {
    if (value == "red") {
      config.source_law.kind = SpectrumLaw::Kind::kRed;
    } else if (value == "flat") {
      config.source_law.kind = SpectrumLaw::Kind::kFlat;
    } else {
      bad_value(key, value, "red or flat");
    }
  } else if (key == "source_exponent") {
    config.source_law.exponent = parse_number<double>(key, value);
  } else if (key == "source_seed") {
    config.source_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "snr_in_db") {
    config.snr_in_db = parse_number_list(key, value);
  } else if (key == "n_realizations") {
    config.n_realizations = parse_number<int>(key, value);
  } else if (key == "methods") {
    config.methods.clear();
    for (auto item : split_list(value)) {
      Method m{};
      if (item == "optimal") {
        m = Method::kOptimal;
      } else if (item == "threshold") {
        m = Method::kThreshold;
      } else if (item == "gwks") {
        m = Method::kGwks;
      } else {
        bad_value(key, item, "optimal, threshold or gwks");
      }
      if (std::find(config.methods.begin(), config.methods.end(), m) == config.methods.end()) {
        config.methods.push_back(m);
      }
    }
  } else if (key == "kappa_grid") {
    config.kappa_grid = parse_number_list(key, value);
  } else if (key == "threshold_multiplier") {
    config.threshold_multiplier = parse_number<double>(key, value);
  } else if (key == "filter_mode") {
    if (value == "axisym") {
      config.filter.mode = FilterMode::kAxisymClosedForm;
    } else if (value == "matrix") {
      config.filter.mode = FilterMode::kMatrix;
    } else {
      bad_value(key, value, "axisym or matrix");
    }
  } else if (key == "filter_scaling") {
    config.filter.filter_scaling = parse_bool(key, value);
  } else if (key == "out_dir") {
    config.out_dir = resolve(base_dir, value);
  } else if (key == "master_seed") {
    config.master_seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw Error(ErrorCode::kConfig, "unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  config.out_dir = base_dir.empty() ? std::filesystem::path("out") : base_dir / "out";
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1), base_dir);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(number) + ": " + e.detail());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  auto config = parse_config(in, path.parent_path());
  config.validate();
  return config;
}

}  // namespace sphwiener
