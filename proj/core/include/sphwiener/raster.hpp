#pragma once

// Grayscale rendering of real-valued sphere maps: binary PGM (P5) with rows
// along theta and columns along phi, linearly min-max normalized to 0..255.
// The range goes to a sidecar `<stem>.minmax.txt` next to the raster.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sphwiener/harmonic.hpp"

namespace sphwiener {

struct RasterRange {
  double min = 0.0;
  double max = 0.0;
  /// Set when min == max; every pixel is then mid-gray (128).
  bool constant = false;
};

struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;
  RasterRange range;

  /// Pixel values mapped back into [min, max].
  std::vector<double> values() const;
};

/// Sidecar path for a raster path: `dir/name.pgm` -> `dir/name.minmax.txt`.
std::filesystem::path sidecar_path(const std::filesystem::path& raster_path);

/// Quantizes row-major `values` (rows x cols); empty input throws
/// kInvalidParameter.
Raster quantize(int rows, int cols, std::span<const double> values);

/// Writes the PGM and its sidecar; throws kIo with the path on failure.
void write_raster(const std::filesystem::path& path, const Raster& raster);
Raster read_raster(const std::filesystem::path& path);

/// Renders the real part of `map`; maps with an imaginary part above 1e-8
/// of their peak magnitude throw kInvalidParameter.
RasterRange render_map(const SphereMap& map, const std::filesystem::path& path);

}  // namespace sphwiener
