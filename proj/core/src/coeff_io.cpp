#include "sphwiener/coeff_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sphwiener/error.hpp"

namespace sphwiener {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::kIo,
                "line " + std::to_string(line_no) + ": cannot parse number '" + text + "'");
  }
  return value;
}

void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kIo, "empty file, expected header " + expected);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  if (line != expected) {
    throw Error(ErrorCode::kIo, "bad header '" + line + "', expected '" + expected + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific, 16);
  return std::string(buffer, result.ptr);
}

void write_coeffs_csv(std::ostream& out, const HarmonicCoeffs& coeffs) {
  out << "l,m,re,im\n";
  for (int l = 0; l < coeffs.bandlimit(); ++l) {
    for (int m = -l; m <= l; ++m) {
      const auto v = coeffs(l, m);
      out << l << ',' << m << ',' << format_double(v.real()) << ',' << format_double(v.imag())
          << '\n';
    }
  }
}

void write_coeffs_csv(const std::filesystem::path& path, const HarmonicCoeffs& coeffs) {
  auto out = open_out(path);
  write_coeffs_csv(out, coeffs);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

HarmonicCoeffs read_coeffs_csv(std::istream& in) {
  expect_header(in, "l,m,re,im");
  std::vector<Complex> values;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    const int l = parse_number<int>(fields[0], line_no);
    const int m = parse_number<int>(fields[1], line_no);
    if (l < 0 || m < -l || m > l || flat_index(l, m) != values.size()) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) +
                                      ": rows must be in flat (l, m) order");
    }
    values.emplace_back(parse_number<double>(fields[2], line_no),
                        parse_number<double>(fields[3], line_no));
  }
  const auto bandlimit = static_cast<int>(std::lround(std::sqrt(static_cast<double>(values.size()))));
  if (values.empty() || static_cast<std::size_t>(bandlimit) * bandlimit != values.size()) {
    throw Error(ErrorCode::kIo, "coefficient count " + std::to_string(values.size()) +
                                    " is not a complete bandlimited set");
  }
  return HarmonicCoeffs(bandlimit, std::move(values));
}

HarmonicCoeffs read_coeffs_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_coeffs_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_map_csv(std::ostream& out, const SphereMap& map) {
  out << "theta,phi,re,im\n";
  const auto& grid = map.grid();
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int k = 0; k < grid.n_phi(); ++k) {
      const auto v = map(i, k);
      out << format_double(grid.theta()[i]) << ',' << format_double(grid.phi(k)) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

void write_map_csv(const std::filesystem::path& path, const SphereMap& map) {
  auto out = open_out(path);
  write_map_csv(out, map);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

SphereMap read_map_csv(std::istream& in) {
  expect_header(in, "theta,phi,re,im");
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<Complex> samples;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kIo, "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    thetas.push_back(parse_number<double>(fields[0], line_no));
    phis.push_back(parse_number<double>(fields[1], line_no));
    samples.emplace_back(parse_number<double>(fields[2], line_no),
                         parse_number<double>(fields[3], line_no));
  }
  if (samples.empty()) throw Error(ErrorCode::kIo, "map file has no samples");

  int n_phi = 1;
  while (static_cast<std::size_t>(n_phi) < thetas.size() && thetas[n_phi] == thetas[0]) ++n_phi;
  if (samples.size() % static_cast<std::size_t>(n_phi) != 0) {
    throw Error(ErrorCode::kIo, "sample count is not a multiple of the ring length");
  }
  const int n_theta = static_cast<int>(samples.size() / n_phi);
  const auto grid = make_gauss_legendre_grid(n_theta);
  const SphereGrid layout(std::vector<double>(grid.theta().begin(), grid.theta().end()),
                          std::vector<double>(grid.weights().begin(), grid.weights().end()), n_phi);
  for (int i = 0; i < n_theta; ++i) {
    for (int k = 0; k < n_phi; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * n_phi + k;
      if (std::abs(thetas[idx] - layout.theta()[i]) > 1e-9 ||
          std::abs(phis[idx] - layout.phi(k)) > 1e-9) {
        throw Error(ErrorCode::kIo,
                    "sample " + std::to_string(idx) +
                        " is not on a Gauss-Legendre theta / uniform phi grid");
      }
    }
  }
  return SphereMap(layout, std::move(samples));
}

SphereMap read_map_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_map_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace sphwiener
