#include "sphwiener/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphwiener/error.hpp"

namespace sphwiener {

namespace {

void require_bandlimit(int bandlimit) {
  if (bandlimit < 1) {
    throw Error(ErrorCode::kInvalidBandlimit,
                "bandlimit must be >= 1, got " + std::to_string(bandlimit));
  }
}

// Legendre P_n(x) and its derivative by the standard recurrence.
std::pair<double, double> legendre_and_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

constexpr int kRescaleExponent = 600;
const double kRescaleUp = std::ldexp(1.0, kRescaleExponent);

}  // namespace

DegreeOrder degree_order(std::size_t flat) noexcept {
  auto l = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  while (static_cast<std::size_t>(l * l) > flat) --l;
  while (static_cast<std::size_t>((l + 1) * (l + 1)) <= flat) ++l;
  return {l, static_cast<int>(flat) - l * l - l};
}

// ---------------------------------------------------------------------------
// HarmonicCoeffs

HarmonicCoeffs::HarmonicCoeffs(int bandlimit) : bandlimit_(bandlimit) {
  require_bandlimit(bandlimit);
  values_.assign(static_cast<std::size_t>(bandlimit) * bandlimit, Complex{});
}

HarmonicCoeffs::HarmonicCoeffs(int bandlimit, std::vector<Complex> values)
    : bandlimit_(bandlimit), values_(std::move(values)) {
  require_bandlimit(bandlimit);
  if (values_.size() != static_cast<std::size_t>(bandlimit) * bandlimit) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(bandlimit * bandlimit) + " coefficients, got " +
                    std::to_string(values_.size()));
  }
}

const Complex& HarmonicCoeffs::at(int l, int m) const {
  if (l < 0 || l >= bandlimit_ || m < -l || m > l) {
    throw Error(ErrorCode::kInvalidOrder,
                "(l, m) = (" + std::to_string(l) + ", " + std::to_string(m) +
                    ") outside bandlimit " + std::to_string(bandlimit_));
  }
  return values_[flat_index(l, m)];
}

double HarmonicCoeffs::energy() const noexcept {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum;
}

double HarmonicCoeffs::max_abs() const noexcept {
  double out = 0.0;
  for (const auto& v : values_) out = std::max(out, std::abs(v));
  return out;
}

bool HarmonicCoeffs::satisfies_real_symmetry(double rel_tol) const noexcept {
  const double scale = std::max(max_abs(), 1e-300);
  for (int l = 0; l < bandlimit_; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const Complex expected = sign * std::conj((*this)(l, m));
      if (std::abs((*this)(l, -m) - expected) > rel_tol * scale) return false;
    }
  }
  return true;
}

void HarmonicCoeffs::set_real_field(bool flag) {
  if (flag && !satisfies_real_symmetry(1e-12)) {
    throw Error(ErrorCode::kInvalidParameter,
                "coefficients do not satisfy the real-field conjugate symmetry");
  }
  real_field_ = flag;
}

HarmonicCoeffs& HarmonicCoeffs::operator+=(const HarmonicCoeffs& other) {
  if (other.bandlimit_ != bandlimit_) {
    throw Error(ErrorCode::kBandlimitMismatch, "cannot add coefficients of different bandlimit");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  real_field_ = real_field_ && other.real_field_;
  return *this;
}

HarmonicCoeffs& HarmonicCoeffs::operator-=(const HarmonicCoeffs& other) {
  if (other.bandlimit_ != bandlimit_) {
    throw Error(ErrorCode::kBandlimitMismatch,
                "cannot subtract coefficients of different bandlimit");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  real_field_ = real_field_ && other.real_field_;
  return *this;
}

HarmonicCoeffs& HarmonicCoeffs::operator*=(double scale) noexcept {
  for (auto& v : values_) v *= scale;
  return *this;
}

HarmonicCoeffs& HarmonicCoeffs::operator*=(Complex scale) noexcept {
  for (auto& v : values_) v *= scale;
  real_field_ = real_field_ && scale.imag() == 0.0;
  return *this;
}

double max_abs_diff(const HarmonicCoeffs& a, const HarmonicCoeffs& b) {
  if (a.bandlimit() != b.bandlimit()) {
    throw Error(ErrorCode::kBandlimitMismatch, "max_abs_diff on different bandlimits");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out = std::max(out, std::abs(a.values_[i] - b.values_[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SphereGrid / SphereMap

SphereGrid::SphereGrid(std::vector<double> theta, std::vector<double> weights, int n_phi)
    : theta_(std::move(theta)), weights_(std::move(weights)), n_phi_(n_phi) {
  if (theta_.empty() || n_phi_ < 1) {
    throw Error(ErrorCode::kInvalidParameter, "grid needs at least one ring and one phi node");
  }
  if (weights_.size() != theta_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one quadrature weight per theta ring required");
  }
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (!(theta_[i] > 0.0 && theta_[i] < kPi) || !(weights_[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter, "theta nodes must lie in (0, pi) with weights > 0");
    }
    if (i > 0 && !(theta_[i] > theta_[i - 1])) {
      throw Error(ErrorCode::kInvalidParameter, "theta nodes must be strictly ascending");
    }
  }
}

double SphereGrid::phi(int k) const noexcept { return 2.0 * kPi * k / n_phi_; }

double SphereGrid::phi_weight() const noexcept { return 2.0 * kPi / n_phi_; }

bool SphereGrid::exact_for(int bandlimit) const noexcept {
  return n_theta() >= bandlimit && n_phi_ >= 2 * bandlimit - 1;
}

SphereGrid make_gauss_legendre_grid(int bandlimit) {
  require_bandlimit(bandlimit);
  const int n = bandlimit;
  std::vector<double> x(n);
  std::vector<double> w(n);
  // Roots come in +/- pairs; solve for the upper half by Newton from the
  // Tricomi initial guess and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double root = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_and_derivative(n, root);
      const double step = p / dp;
      root -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre_and_derivative(n, root);
    (void)p;
    const double weight = 2.0 / ((1.0 - root * root) * dp * dp);
    x[i] = root;
    x[n - 1 - i] = -root;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  // x descending, so theta = acos(x) ascending.
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = std::acos(x[i]);
  return SphereGrid(std::move(theta), std::move(w), 2 * bandlimit - 1);
}

SphereMap::SphereMap(SphereGrid grid) : grid_(std::move(grid)) {
  samples_.assign(grid_.sample_count(), Complex{});
}

SphereMap::SphereMap(SphereGrid grid, std::vector<Complex> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.sample_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "sample count must equal n_theta * n_phi");
  }
}

double SphereMap::energy() const noexcept {
  double sum = 0.0;
  for (int i = 0; i < grid_.n_theta(); ++i) {
    double ring = 0.0;
    for (int k = 0; k < grid_.n_phi(); ++k) ring += std::norm((*this)(i, k));
    sum += grid_.weights()[i] * ring;
  }
  return sum * grid_.phi_weight();
}

double SphereMap::max_abs_imag() const noexcept {
  double out = 0.0;
  for (const auto& v : samples_) out = std::max(out, std::abs(v.imag()));
  return out;
}

double SphereMap::max_abs() const noexcept {
  double out = 0.0;
  for (const auto& v : samples_) out = std::max(out, std::abs(v));
  return out;
}

Complex inner_product(const SphereMap& f, const SphereMap& g) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorCode::kDimensionMismatch, "inner product of maps on different grids");
  }
  const auto& grid = f.grid();
  Complex sum{};
  for (int i = 0; i < grid.n_theta(); ++i) {
    Complex ring{};
    for (int k = 0; k < grid.n_phi(); ++k) ring += f(i, k) * std::conj(g(i, k));
    sum += grid.weights()[i] * ring;
  }
  return sum * grid.phi_weight();
}

// ---------------------------------------------------------------------------
// Legendre functions and harmonics

void legendre_column(int m, int lmax, double theta, std::span<double> out) {
  if (m < 0 || lmax < m) {
    throw Error(ErrorCode::kInvalidOrder, "legendre_column requires 0 <= m <= lmax");
  }
  if (out.size() < static_cast<std::size_t>(lmax - m + 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "legendre_column output too small");
  }
  const double x = std::cos(theta);
  const double s = std::abs(std::sin(theta));

  // lambda_m^m = (-1)^m sqrt((2m+1)/(4 pi) * (2m)! / (2^m m!)^2) sin^m(theta)
  double mantissa = 0.0;
  int exponent = 0;
  if (m == 0) {
    mantissa = 1.0 / std::sqrt(4.0 * kPi);
  } else if (s == 0.0) {
    for (int l = m; l <= lmax; ++l) out[l - m] = 0.0;
    return;
  } else {
    const double log_value =
        0.5 * (std::log((2.0 * m + 1.0) / (4.0 * kPi)) + std::lgamma(2.0 * m + 1.0) -
               2.0 * m * std::log(2.0) - 2.0 * std::lgamma(m + 1.0)) +
        m * std::log(s);
    const double log2_value = log_value / std::log(2.0);
    exponent = static_cast<int>(std::floor(log2_value));
    mantissa = std::exp2(log2_value - exponent);
    if (m % 2 == 1) mantissa = -mantissa;
  }

  double prev = 0.0;       // lambda_{l-2}^m, in units of 2^exponent
  double current = mantissa;  // lambda_{l-1}^m
  out[0] = std::ldexp(current, exponent);
  for (int l = m + 1; l <= lmax; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double m2 = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
    const double next = a * (x * current - b * prev);
    prev = current;
    current = next;
    if (std::abs(current) > kRescaleUp) {
      current = std::ldexp(current, -kRescaleExponent);
      prev = std::ldexp(prev, -kRescaleExponent);
      exponent += kRescaleExponent;
    }
    out[l - m] = std::ldexp(current, exponent);
  }
}

std::vector<double> legendre_table(int bandlimit, double theta) {
  require_bandlimit(bandlimit);
  const auto count = static_cast<std::size_t>(bandlimit) * (bandlimit + 1) / 2;
  std::vector<double> table(count);
  std::vector<double> column(bandlimit);
  for (int m = 0; m < bandlimit; ++m) {
    legendre_column(m, bandlimit - 1, theta, column);
    for (int l = m; l < bandlimit; ++l) {
      table[static_cast<std::size_t>(l) * (l + 1) / 2 + m] = column[l - m];
    }
  }
  return table;
}

Complex ylm(int l, int m, double theta, double phi) {
  if (l < 0) throw Error(ErrorCode::kInvalidOrder, "degree must be >= 0");
  if (m < -l || m > l) {
    throw Error(ErrorCode::kInvalidOrder,
                "|m| > l for (l, m) = (" + std::to_string(l) + ", " + std::to_string(m) + ")");
  }
  const int am = std::abs(m);
  std::vector<double> column(l - am + 1);
  legendre_column(am, l, theta, column);
  double value = column[l - am];
  if (m < 0 && am % 2 == 1) value = -value;
  return std::polar(value, m * phi);
}

namespace {

// exp(-2 pi i t / n) for t = 0 .. n-1; indexing by (m*k) mod n keeps the
// twiddles exactly periodic.
std::vector<Complex> twiddles(int n) {
  std::vector<Complex> out(n);
  for (int t = 0; t < n; ++t) out[t] = std::polar(1.0, -2.0 * kPi * t / n);
  return out;
}

std::size_t twiddle_index(int m, int k, int n) {
  const long long idx = (static_cast<long long>(m) * k) % n;
  return static_cast<std::size_t>(idx < 0 ? idx + n : idx);
}

}  // namespace

HarmonicCoeffs forward_sht(const SphereMap& map, int bandlimit) {
  require_bandlimit(bandlimit);
  const auto& grid = map.grid();
  if (!grid.exact_for(bandlimit)) {
    throw Error(ErrorCode::kUndersampledGrid,
                "grid " + std::to_string(grid.n_theta()) + "x" + std::to_string(grid.n_phi()) +
                    " is too small for bandlimit " + std::to_string(bandlimit));
  }
  const int n_phi = grid.n_phi();
  const auto tw = twiddles(n_phi);
  HarmonicCoeffs out(bandlimit);
  std::vector<Complex> ring_fourier(2 * bandlimit - 1);

  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int m = -(bandlimit - 1); m < bandlimit; ++m) {
      Complex sum{};
      for (int k = 0; k < n_phi; ++k) sum += map(i, k) * tw[twiddle_index(m, k, n_phi)];
      ring_fourier[m + bandlimit - 1] = sum * grid.phi_weight();
    }
    const auto table = legendre_table(bandlimit, grid.theta()[i]);
    const double w = grid.weights()[i];
    for (int l = 0; l < bandlimit; ++l) {
      const std::size_t row = static_cast<std::size_t>(l) * (l + 1) / 2;
      for (int m = -l; m <= l; ++m) {
        const int am = std::abs(m);
        double lam = table[row + am];
        if (m < 0 && am % 2 == 1) lam = -lam;
        out(l, m) += w * lam * ring_fourier[m + bandlimit - 1];
      }
    }
  }
  return out;
}

SphereMap inverse_sht(const HarmonicCoeffs& coeffs, const SphereGrid& grid) {
  const int bandlimit = coeffs.bandlimit();
  const int n_phi = grid.n_phi();
  const auto tw = twiddles(n_phi);
  SphereMap map(grid);
  std::vector<Complex> ring_fourier(2 * bandlimit - 1);

  for (int i = 0; i < grid.n_theta(); ++i) {
    const auto table = legendre_table(bandlimit, grid.theta()[i]);
    std::fill(ring_fourier.begin(), ring_fourier.end(), Complex{});
    for (int l = 0; l < bandlimit; ++l) {
      const std::size_t row = static_cast<std::size_t>(l) * (l + 1) / 2;
      for (int m = -l; m <= l; ++m) {
        const int am = std::abs(m);
        double lam = table[row + am];
        if (m < 0 && am % 2 == 1) lam = -lam;
        ring_fourier[m + bandlimit - 1] += coeffs(l, m) * lam;
      }
    }
    for (int k = 0; k < n_phi; ++k) {
      Complex sum{};
      for (int m = -(bandlimit - 1); m < bandlimit; ++m) {
        // conj(exp(-i m phi_k)) = exp(i m phi_k)
        sum += ring_fourier[m + bandlimit - 1] * std::conj(tw[twiddle_index(m, k, n_phi)]);
      }
      map(i, k) = sum;
    }
  }
  return map;
}

}  // namespace sphwiener
