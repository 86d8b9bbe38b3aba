#pragma once

// Self-contained Bessel functions for the numerical oracle. Nothing here is
// shared with the closed-form amplitude code.

#include <complex>

#include "twinbeam/errors.hpp"

namespace twinbeam {

inline constexpr int max_bessel_order = 64;

/// Thrown when |z| is beyond the range where I_nu(z) is evaluated unscaled.
/// exponent() is Re z, i.e. I_nu(z) ~ e^{exponent} / sqrt(2 pi |z|).
class BesselOverflowError : public DomainError {
 public:
  BesselOverflowError(const std::string& what, double exponent) : DomainError(what), exponent_(exponent) {}
  double exponent() const { return exponent_; }

 private:
  double exponent_;
};

/// J_n(x) for 0 <= n <= 64 and finite |x| <= 1e8.
///
/// Ascending series for |x| <= 1, Miller backward recurrence normalised by
/// J_0 + 2 sum J_2k = 1 up to |x| = 200, and the Hankel asymptotic expansion of
/// J_0, J_1 with upward recurrence once the argument is large compared with the
/// order. Negative x uses J_n(-x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

/// I_nu(z) for 0 <= nu <= 64 and |z| <= 500. Ascending series for small |z|,
/// otherwise Miller recurrence normalised by e^z = I_0 + 2 sum I_k (with
/// I_nu(-z) = (-1)^nu I_nu(z) folding Re z < 0 onto the right half plane).
std::complex<double> modified_bessel_i(int nu, std::complex<double> z);

inline std::complex<double> modified_bessel_i(int nu, double x) { return modified_bessel_i(nu, std::complex<double>(x, 0.0)); }

}  // namespace twinbeam
