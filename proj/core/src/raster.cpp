#include "sphwiener/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sphwiener/coeff_io.hpp"
#include "sphwiener/error.hpp"

namespace sphwiener {

namespace {

constexpr int kMaxGray = 255;
constexpr std::uint8_t kMidGray = 128;

std::string read_token(std::istream& in) {
  std::string token;
  while (in >> token) {
    if (token.front() != '#') return token;
    std::string rest;
    std::getline(in, rest);
  }
  return {};
}

}  // namespace

std::vector<double> Raster::values() const {
  std::vector<double> out(pixels.size());
  const double span = range.max - range.min;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    out[i] = range.constant ? range.min : range.min + span * pixels[i] / kMaxGray;
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& raster_path) {
  auto out = raster_path;
  out.replace_extension(".minmax.txt");
  return out;
}

Raster quantize(int rows, int cols, std::span<const double> values) {
  if (rows < 1 || cols < 1 || values.empty()) throw Error(ErrorCode::kInvalidParameter, "cannot render an empty map");
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "raster value count does not match rows x cols");
  }
  Raster raster;
  raster.rows = rows;
  raster.cols = cols;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi)) {
    throw Error(ErrorCode::kInvalidParameter, "cannot render non-finite values");
  }
  raster.range = {*lo, *hi, *lo == *hi};
  raster.pixels.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (raster.range.constant) {
      raster.pixels[i] = kMidGray;
    } else {
      const double t = (values[i] - *lo) / (*hi - *lo);
      raster.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * kMaxGray));
    }
  }
  return raster;
}

void write_raster(const std::filesystem::path& path, const Raster& raster) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
    out << "P5\n" << raster.cols << ' ' << raster.rows << '\n' << kMaxGray << '\n';
    out.write(reinterpret_cast<const char*>(raster.pixels.data()), static_cast<std::streamsize>(raster.pixels.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
  }
  const auto side = sidecar_path(path);
  std::ofstream out(side, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + side.string() + " for writing");
  out << "min = " << format_double(raster.range.min) << '\n'
      << "max = " << format_double(raster.range.max) << '\n'
      << "constant = " << (raster.range.constant ? 1 : 0) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + side.string());
}

Raster read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  Raster raster;
  if (read_token(in) != "P5") throw Error(ErrorCode::kIo, path.string() + ": not a binary PGM");
  try {
    raster.cols = std::stoi(read_token(in));
    raster.rows = std::stoi(read_token(in));
    if (std::stoi(read_token(in)) != kMaxGray) throw Error(ErrorCode::kIo, path.string() + ": unsupported maxval");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kIo, path.string() + ": malformed PGM header");
  }
  in.get();
  raster.pixels.resize(static_cast<std::size_t>(raster.rows) * raster.cols);
  in.read(reinterpret_cast<char*>(raster.pixels.data()), static_cast<std::streamsize>(raster.pixels.size()));
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": truncated pixel data");

  const auto side = sidecar_path(path);
  std::ifstream meta(side);
  if (!meta) throw Error(ErrorCode::kIo, "cannot open " + side.string());
  std::string line;
  int seen = 0;
  while (std::getline(meta, line)) {
    std::istringstream fields(line);
    std::string key, eq, value;
    if (!(fields >> key >> eq >> value) || eq != "=") continue;
    try {
      if (key == "min") {
        raster.range.min = std::stod(value);
        ++seen;
      } else if (key == "max") {
        raster.range.max = std::stod(value);
        ++seen;
      } else if (key == "constant") {
        raster.range.constant = value == "1";
        ++seen;
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kIo, side.string() + ": malformed value for " + key);
    }
  }
  if (seen != 3) throw Error(ErrorCode::kIo, side.string() + ": missing min, max or constant");
  return raster;
}

RasterRange render_map(const SphereMap& map, const std::filesystem::path& path) {
  const double peak = map.max_abs();
  if (map.max_abs_imag() > 1e-8 * peak) {
    throw Error(ErrorCode::kInvalidParameter, "render_map needs a real-valued map");
  }
  std::vector<double> values(map.samples().size());
  std::transform(map.samples().begin(), map.samples().end(), values.begin(),
                 [](const Complex& v) { return v.real(); });
  const auto raster = quantize(map.grid().n_theta(), map.grid().n_phi(), values);
  write_raster(path, raster);
  return raster.range;
}

}  // namespace sphwiener
