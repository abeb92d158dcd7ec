#pragma once

// Wigner-d / Wigner-D functions (zyz Euler angles) and rotation of
// spherical harmonic spectra.
//
//   D^l_{m,m'}(phi, theta, omega) = exp(-i m phi) d^l_{m,m'}(theta) exp(-i m' omega)
//
// With this sign choice D^l_{m,0}(phi, theta, 0) = sqrt(4 pi / (2l+1)) conj(Y_l^m(theta, phi)).

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sphwiener/harmonic.hpp"

namespace sphwiener {

/// Rotation rho = (varphi, vartheta, omega), normalized on construction to
/// varphi, omega in [0, 2 pi) and vartheta in [0, pi]. A vartheta outside
/// [0, pi] is folded using (a, -b, g) == (a + pi, b, g + pi).
class EulerAngles {
 public:
  EulerAngles() = default;
  EulerAngles(double varphi, double vartheta, double omega);

  double varphi() const noexcept { return varphi_; }
  double vartheta() const noexcept { return vartheta_; }
  double omega() const noexcept { return omega_; }

  /// The rotation undoing this one: (-omega, -vartheta, -varphi).
  EulerAngles inverse() const;

 private:
  double varphi_ = 0.0;
  double vartheta_ = 0.0;
  double omega_ = 0.0;
};

/// d^l_{m,mp}(beta) for l = max(|m|,|mp|) .. lmax into out[l - max(|m|,|mp|)],
/// by the three-term recursion in l seeded with the closed-form edge value.
void wigner_d_column(int m, int mp, int lmax, double beta, std::span<double> out);

double wigner_small_d(int l, int m, int mp, double beta);
Complex wigner_D(int l, int m, int mp, const EulerAngles& rho);

/// Real matrices d^l(beta) for l < L; entry (m + l, mp + l).
std::vector<Eigen::MatrixXd> wigner_d_matrices(int bandlimit, double beta);
/// Complex matrices D^l(rho) for l < L; entry (m + l, mp + l).
std::vector<Eigen::MatrixXcd> wigner_D_matrices(int bandlimit, const EulerAngles& rho);

/// |D^l_{m,0}(varphi, vartheta, 0) - sqrt(4 pi/(2l+1)) conj(Y_l^m(vartheta, varphi))|.
double y_bridge_deviation(int l, int m, double vartheta, double varphi);

/// (D_rho f)_l^m = sum_{m'} D^l_{m,m'}(rho) (f)_l^{m'}.
HarmonicCoeffs rotate_coeffs(const HarmonicCoeffs& f, const EulerAngles& rho);

}  // namespace sphwiener

namespace sphwiener {

/// Wigner-D orthogonality constant 8 pi^2 / (2l + 1).
inline double wigner_norm(int l) noexcept { return 8.0 * kPi * kPi / (2.0 * l + 1.0); }

}  // namespace sphwiener
