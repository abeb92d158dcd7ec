#pragma once

// Spherical harmonic coefficients, Gauss-Legendre sphere grids, and exact
// forward/inverse transforms for bandlimited signals.
//
// Conventions: orthonormal complex harmonics with Condon-Shortley phase,
//   Y_l^m(theta, phi) = lambda_l^|m|(cos theta) e^{i m phi} * (m < 0 ? (-1)^m : 1),
// so that Y_l^{-m} = (-1)^m conj(Y_l^m). Coefficients are stored in flat
// order l*l + l + m.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sphwiener {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

constexpr std::size_t flat_index(int l, int m) noexcept {
  return static_cast<std::size_t>(l * l + l + m);
}

struct DegreeOrder {
  int l;
  int m;
  friend bool operator==(const DegreeOrder&, const DegreeOrder&) = default;
};

DegreeOrder degree_order(std::size_t flat) noexcept;

/// Triangular array of spectral coefficients (f)_l^m, 0 <= l < L, |m| <= l.
class HarmonicCoeffs {
 public:
  /// Zero coefficients. Throws kInvalidBandlimit for L < 1.
  explicit HarmonicCoeffs(int bandlimit);
  /// Takes ownership of `values`, which must hold exactly L^2 entries.
  HarmonicCoeffs(int bandlimit, std::vector<Complex> values);

  int bandlimit() const noexcept { return bandlimit_; }
  std::size_t size() const noexcept { return values_.size(); }

  Complex& operator()(int l, int m) { return values_[flat_index(l, m)]; }
  const Complex& operator()(int l, int m) const { return values_[flat_index(l, m)]; }
  /// Bounds-checked access; throws kInvalidOrder.
  const Complex& at(int l, int m) const;

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Sum of |(f)_l^m|^2, i.e. the signal energy by Parseval.
  double energy() const noexcept;
  double max_abs() const noexcept;

  /// Whether (f)_l^{-m} = (-1)^m conj((f)_l^m) holds to `rel_tol` relative
  /// to the largest coefficient magnitude.
  bool satisfies_real_symmetry(double rel_tol = 1e-12) const noexcept;

  /// Flag for coefficients of a real-valued field. Setting it validates the
  /// symmetry to 1e-12 and throws kInvalidParameter otherwise.
  bool real_field() const noexcept { return real_field_; }
  void set_real_field(bool flag);

  HarmonicCoeffs& operator+=(const HarmonicCoeffs& other);
  HarmonicCoeffs& operator-=(const HarmonicCoeffs& other);
  HarmonicCoeffs& operator*=(double scale) noexcept;
  HarmonicCoeffs& operator*=(Complex scale) noexcept;

  friend HarmonicCoeffs operator+(HarmonicCoeffs a, const HarmonicCoeffs& b) { return a += b; }
  friend HarmonicCoeffs operator-(HarmonicCoeffs a, const HarmonicCoeffs& b) { return a -= b; }
  friend HarmonicCoeffs operator*(double s, HarmonicCoeffs a) { return a *= s; }
  friend HarmonicCoeffs operator*(Complex s, HarmonicCoeffs a) { return a *= s; }

  /// Maximum absolute coefficient difference; throws on bandlimit mismatch.
  friend double max_abs_diff(const HarmonicCoeffs& a, const HarmonicCoeffs& b);

 private:
  int bandlimit_;
  std::vector<Complex> values_;
  bool real_field_ = false;
};

/// Equiangular-in-phi, Gauss-Legendre-in-theta sampling of the sphere.
class SphereGrid {
 public:
  /// `theta` in (0, pi) ascending, one positive quadrature weight (in cos
  /// theta) per ring; phi nodes are 2*pi*k/n_phi.
  SphereGrid(std::vector<double> theta, std::vector<double> weights, int n_phi);

  int n_theta() const noexcept { return static_cast<int>(theta_.size()); }
  int n_phi() const noexcept { return n_phi_; }
  std::size_t sample_count() const noexcept {
    return theta_.size() * static_cast<std::size_t>(n_phi_);
  }

  std::span<const double> theta() const noexcept { return theta_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double phi(int k) const noexcept;
  /// Weight of a single phi node, 2*pi/n_phi.
  double phi_weight() const noexcept;

  /// Quadrature is exact for products of two bandlimit-L signals.
  bool exact_for(int bandlimit) const noexcept;

  friend bool operator==(const SphereGrid&, const SphereGrid&) = default;

 private:
  std::vector<double> theta_;
  std::vector<double> weights_;
  int n_phi_;
};

/// L Gauss-Legendre rings in cos(theta) and 2L-1 phi nodes.
SphereGrid make_gauss_legendre_grid(int bandlimit);

/// Samples of a signal on a SphereGrid, ring-major (theta outer, phi inner).
class SphereMap {
 public:
  explicit SphereMap(SphereGrid grid);
  SphereMap(SphereGrid grid, std::vector<Complex> samples);

  const SphereGrid& grid() const noexcept { return grid_; }
  Complex& operator()(int ring, int k) { return samples_[index(ring, k)]; }
  const Complex& operator()(int ring, int k) const { return samples_[index(ring, k)]; }
  std::span<Complex> samples() noexcept { return samples_; }
  std::span<const Complex> samples() const noexcept { return samples_; }

  /// Quadrature of |f|^2 over the sphere.
  double energy() const noexcept;
  double max_abs_imag() const noexcept;
  double max_abs() const noexcept;

 private:
  std::size_t index(int ring, int k) const noexcept {
    return static_cast<std::size_t>(ring) * static_cast<std::size_t>(grid_.n_phi()) +
           static_cast<std::size_t>(k);
  }

  SphereGrid grid_;
  std::vector<Complex> samples_;
};

/// Quadrature of f * conj(g) over the sphere; grids must be equal.
Complex inner_product(const SphereMap& f, const SphereMap& g);

/// Normalized associated Legendre values lambda_l^m(cos theta) for fixed
/// m >= 0 and l = m .. lmax, written to out[l - m]. Uses the three-term
/// recursion in l with a binary exponent carried alongside the mantissa, so
/// the sectoral seed sin^m(theta) never underflows mid-recursion.
void legendre_column(int m, int lmax, double theta, std::span<double> out);

/// lambda_l^m for all 0 <= m <= l < L at one colatitude, indexed
/// l(l+1)/2 + m.
std::vector<double> legendre_table(int bandlimit, double theta);

/// Orthonormal spherical harmonic with Condon-Shortley phase.
Complex ylm(int l, int m, double theta, double phi);

/// Exact for bandlimit-L maps on a grid with exact_for(L).
HarmonicCoeffs forward_sht(const SphereMap& map, int bandlimit);
SphereMap inverse_sht(const HarmonicCoeffs& coeffs, const SphereGrid& grid);

}  // namespace sphwiener
