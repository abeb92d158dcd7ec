#pragma once

// Project-wide CSV formats. Coefficients: header `l,m,re,im`, rows in flat
// index order. Maps: header `theta,phi,re,im`, ring-major. All doubles are
// written with 17 significant digits so files round-trip bit-exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sphwiener/harmonic.hpp"

namespace sphwiener {

/// Shortest-exact formatting with at least 17 significant digits.
std::string format_double(double value);

void write_coeffs_csv(std::ostream& out, const HarmonicCoeffs& coeffs);
void write_coeffs_csv(const std::filesystem::path& path, const HarmonicCoeffs& coeffs);

/// The bandlimit is inferred from the row count, which must be a perfect
/// square; rows must appear in flat-index order.
HarmonicCoeffs read_coeffs_csv(std::istream& in);
HarmonicCoeffs read_coeffs_csv(const std::filesystem::path& path);

void write_map_csv(std::ostream& out, const SphereMap& map);
void write_map_csv(const std::filesystem::path& path, const SphereMap& map);

/// Reads a map on a Gauss-Legendre grid: the theta rings must match the
/// Gauss-Legendre nodes for n_theta rings (to 1e-9) and phi must be uniform.
SphereMap read_map_csv(std::istream& in);
SphereMap read_map_csv(const std::filesystem::path& path);

}  // namespace sphwiener
