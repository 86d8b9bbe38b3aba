#include "twinbeam/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace twinbeam {

namespace {

constexpr double rescale_threshold = 1e250;
constexpr double rescale_factor = 1e-250;

int miller_start(int order, double magnitude) {
  const double top = std::max<double>(order, std::ceil(magnitude));
  const int m = static_cast<int>(top + 20.0 + std::sqrt(160.0 * top));
  return 2 * ((m + 1) / 2);
}

double j_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double j_miller(int n, double x) {
  const int m = miller_start(n, x);
  double next = 0.0;   // j_{k+1}
  double cur = 1e-30;  // j_k
  double result = 0.0;
  double norm = 0.0;
  if (m == n) result = cur;
  for (int k = m; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    if (k - 1 == n) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > rescale_threshold) {
      cur *= rescale_factor;
      next *= rescale_factor;
      result *= rescale_factor;
      norm *= rescale_factor;
    }
  }
  norm += cur;
  return result / norm;
}

// Hankel expansion: J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi.
double j_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last && k > 2) break;  // series started to diverge
    last = std::abs(term);
    // k odd -> Q terms with sign (-1)^((k-1)/2); k even -> P terms with sign (-1)^(k/2)
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (last < 1e-17) break;
  }
  const double phase = (0.5 * nu + 0.25) * std::numbers::pi;
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double cp = std::cos(phase);
  const double sp = std::sin(phase);
  const double cos_chi = cx * cp + sx * sp;
  const double sin_chi = sx * cp - cx * sp;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

double j_upward(int n, double x) {
  double jm = j_asymptotic(0, x);
  if (n == 0) return jm;
  double j = j_asymptotic(1, x);
  for (int k = 1; k < n; ++k) {
    const double jp = (2.0 * k / x) * j - jm;
    jm = j;
    j = jp;
  }
  return j;
}

std::complex<double> i_series(int nu, std::complex<double> z) {
  const std::complex<double> half = 0.5 * z;
  std::complex<double> term = 1.0;
  for (int k = 1; k <= nu; ++k) term *= half / static_cast<double>(k);
  const std::complex<double> q = half * half;
  std::complex<double> sum = term;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

std::complex<double> i_miller(int nu, std::complex<double> z) {
  const int m = miller_start(nu, std::abs(z));
  const std::complex<double> two_over_z = 2.0 / z;
  std::complex<double> next = 0.0;
  std::complex<double> cur = 1e-30;
  std::complex<double> result = 0.0;
  std::complex<double> norm = 0.0;
  if (m == nu) result = cur;
  for (int k = m; k >= 1; --k) {
    const std::complex<double> prev = static_cast<double>(k) * two_over_z * cur + next;
    next = cur;
    cur = prev;
    if (k - 1 == nu) result = cur;
    if (k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > rescale_threshold) {
      cur *= rescale_factor;
      next *= rescale_factor;
      result *= rescale_factor;
      norm *= rescale_factor;
    }
  }
  norm += cur;
  return std::exp(z) * result / norm;
}

}  // namespace

double bessel_j(int n, double x) {
  if (n < 0 || n > max_bessel_order) {
    throw DomainError("bessel_j: order " + std::to_string(n) + " outside [0, 64]");
  }
  if (!std::isfinite(x) || std::abs(x) > 1e8) throw DomainError("bessel_j: argument not finite or |x| > 1e8");
  if (x < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(n, -x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= 1.0) return j_series(n, x);
  if (x >= 25.0 && n < 0.8 * x) return j_upward(n, x);
  return j_miller(n, x);
}

std::complex<double> modified_bessel_i(int nu, std::complex<double> z) {
  if (nu < 0 || nu > max_bessel_order) {
    throw DomainError("modified_bessel_i: order " + std::to_string(nu) + " outside [0, 64]");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("modified_bessel_i: argument not finite");
  if (std::abs(z) > 500.0) {
    throw BesselOverflowError("modified_bessel_i: |z| > 500, value scales as exp(" +
                                  std::to_string(std::abs(z.real())) + ")",
                              std::abs(z.real()));
  }
  if (z == std::complex<double>(0.0, 0.0)) return nu == 0 ? 1.0 : 0.0;
  if (z.real() < 0.0) return (nu % 2 == 0 ? 1.0 : -1.0) * modified_bessel_i(nu, -z);
  if (std::abs(z) <= 2.0) return i_series(nu, z);
  return i_miller(nu, z);
}

}  // namespace twinbeam
