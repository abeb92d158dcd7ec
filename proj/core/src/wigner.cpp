#include "sphwiener/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphwiener/error.hpp"

namespace sphwiener {

namespace {

constexpr int kRescaleExponent = 600;
const double kRescaleUp = std::ldexp(1.0, kRescaleExponent);

double wrap_two_pi(double angle) {
  double out = std::fmod(angle, 2.0 * kPi);
  if (out < 0.0) out += 2.0 * kPi;
  if (out >= 2.0 * kPi) out = 0.0;
  return out;
}

void require_orders(int l, int m, int mp) {
  if (l < 0 || std::abs(m) > l || std::abs(mp) > l) {
    throw Error(ErrorCode::kInvalidOrder, "orders (" + std::to_string(m) + ", " +
                                              std::to_string(mp) + ") out of range for degree " +
                                              std::to_string(l));
  }
}

struct Scaled {
  double mantissa;
  int exponent;
};

// c^pc * s^ps * sqrt((2j)! / ((j+k)! (j-k)!)) with sign, as mantissa * 2^exponent.
Scaled edge_value(int j, int k, int pc, int ps, double c, double s, bool negate) {
  if ((pc > 0 && c == 0.0) || (ps > 0 && s == 0.0)) return {0.0, 0};
  double log_value = 0.5 * (std::lgamma(2.0 * j + 1.0) - std::lgamma(j + k + 1.0) -
                            std::lgamma(j - k + 1.0));
  bool negative = negate;
  if (pc > 0) {
    log_value += pc * std::log(std::abs(c));
    if (c < 0.0 && pc % 2 == 1) negative = !negative;
  }
  if (ps > 0) {
    log_value += ps * std::log(std::abs(s));
    if (s < 0.0 && ps % 2 == 1) negative = !negative;
  }
  const double log2_value = log_value / std::log(2.0);
  const int exponent = static_cast<int>(std::floor(log2_value));
  double mantissa = std::exp2(log2_value - exponent);
  return {negative ? -mantissa : mantissa, exponent};
}

// d^j_{a,b}(beta) at j = max(|a|, |b|).
Scaled seed_value(int a, int b, double beta) {
  const int j = std::max(std::abs(a), std::abs(b));
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  if (a == j) return edge_value(j, b, j + b, j - b, c, s, (j - b) % 2 != 0);
  if (b == j) return edge_value(j, a, j + a, j - a, c, s, false);
  if (a == -j) return edge_value(j, b, j - b, j + b, c, s, false);
  return edge_value(j, a, j - a, j + a, c, s, ((a + j) % 2 + 2) % 2 != 0);  // b == -j
}

}  // namespace

EulerAngles::EulerAngles(double varphi, double vartheta, double omega) {
  double b = wrap_two_pi(vartheta);
  if (b > kPi) {
    b = 2.0 * kPi - b;
    varphi += kPi;
    omega += kPi;
  }
  varphi_ = wrap_two_pi(varphi);
  vartheta_ = b;
  omega_ = wrap_two_pi(omega);
}

EulerAngles EulerAngles::inverse() const { return {-omega_, -vartheta_, -varphi_}; }

void wigner_d_column(int m, int mp, int lmax, double beta, std::span<double> out) {
  const int lmin = std::max(std::abs(m), std::abs(mp));
  if (lmax < lmin) {
    throw Error(ErrorCode::kInvalidOrder, "wigner_d_column: lmax below max(|m|, |mp|)");
  }
  if (out.size() < static_cast<std::size_t>(lmax - lmin + 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "wigner_d_column output too small");
  }
  const auto seed = seed_value(m, mp, beta);
  int exponent = seed.exponent;
  double prev = 0.0;
  double current = seed.mantissa;
  out[0] = std::ldexp(current, exponent);

  const double cb = std::cos(beta);
  const double a2 = static_cast<double>(m) * m;
  const double b2 = static_cast<double>(mp) * mp;
  const double ab = static_cast<double>(m) * mp;
  for (int l = lmin + 1; l <= lmax; ++l) {
    double next;
    if (l == 1) {
      next = cb * current;  // only reachable for m = mp = 0
    } else {
      const double ld = l;
      const double l1 = l - 1.0;
      const double lead = ld * (2.0 * ld - 1.0) / std::sqrt((ld * ld - a2) * (ld * ld - b2));
      const double back =
          std::sqrt((l1 * l1 - a2) * (l1 * l1 - b2)) / (l1 * (2.0 * ld - 1.0));
      next = lead * ((cb - ab / (ld * l1)) * current - back * prev);
    }
    prev = current;
    current = next;
    if (std::abs(current) > kRescaleUp) {
      current = std::ldexp(current, -kRescaleExponent);
      prev = std::ldexp(prev, -kRescaleExponent);
      exponent += kRescaleExponent;
    }
    out[l - lmin] = std::ldexp(current, exponent);
  }
}

double wigner_small_d(int l, int m, int mp, double beta) {
  require_orders(l, m, mp);
  const int lmin = std::max(std::abs(m), std::abs(mp));
  std::vector<double> column(l - lmin + 1);
  wigner_d_column(m, mp, l, beta, column);
  return column.back();
}

Complex wigner_D(int l, int m, int mp, const EulerAngles& rho) {
  const double d = wigner_small_d(l, m, mp, rho.vartheta());
  return std::polar(d, -(m * rho.varphi() + mp * rho.omega()));
}

std::vector<Eigen::MatrixXd> wigner_d_matrices(int bandlimit, double beta) {
  if (bandlimit < 1) throw Error(ErrorCode::kInvalidBandlimit, "bandlimit must be >= 1");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(bandlimit);
  for (int l = 0; l < bandlimit; ++l) out.emplace_back(Eigen::MatrixXd::Zero(2 * l + 1, 2 * l + 1));
  std::vector<double> column(bandlimit);
  for (int m = -(bandlimit - 1); m < bandlimit; ++m) {
    for (int mp = -(bandlimit - 1); mp < bandlimit; ++mp) {
      const int lmin = std::max(std::abs(m), std::abs(mp));
      wigner_d_column(m, mp, bandlimit - 1, beta, column);
      for (int l = lmin; l < bandlimit; ++l) out[l](m + l, mp + l) = column[l - lmin];
    }
  }
  return out;
}

std::vector<Eigen::MatrixXcd> wigner_D_matrices(int bandlimit, const EulerAngles& rho) {
  const auto small = wigner_d_matrices(bandlimit, rho.vartheta());
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    Eigen::MatrixXcd big(2 * l + 1, 2 * l + 1);
    for (int m = -l; m <= l; ++m) {
      for (int mp = -l; mp <= l; ++mp) {
        big(m + l, mp + l) =
            std::polar(small[l](m + l, mp + l), -(m * rho.varphi() + mp * rho.omega()));
      }
    }
    out.push_back(std::move(big));
  }
  return out;
}

double y_bridge_deviation(int l, int m, double vartheta, double varphi) {
  require_orders(l, m, 0);
  const auto lhs = wigner_D(l, m, 0, EulerAngles(varphi, vartheta, 0.0));
  const auto rhs = std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) * std::conj(ylm(l, m, vartheta, varphi));
  return std::abs(lhs - rhs);
}

HarmonicCoeffs rotate_coeffs(const HarmonicCoeffs& f, const EulerAngles& rho) {
  const int bandlimit = f.bandlimit();
  const auto big_d = wigner_D_matrices(bandlimit, rho);
  HarmonicCoeffs out(bandlimit);
  for (int l = 0; l < bandlimit; ++l) {
    Eigen::VectorXcd v(2 * l + 1);
    for (int m = -l; m <= l; ++m) v(m + l) = f(l, m);
    const Eigen::VectorXcd r = big_d[l] * v;
    for (int m = -l; m <= l; ++m) out(l, m) = r(m + l);
  }
  if (f.real_field() && out.satisfies_real_symmetry(1e-12)) out.set_real_field(true);
  return out;
}

}  // namespace sphwiener
