#pragma once

// Pump spatial mode, the angular spectrum of its square, and the longitudinal
// phase-matching function with its cosine-Gaussian stand-in.

#include <complex>

#include "twinbeam/errors.hpp"

namespace twinbeam {

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// LG_{p=0}^{l} at (rho, phi), unit-normalized over the plane (1/m).
std::complex<double> lg_field(double rho, double phi, double waist, int oam);

/// Angular spectrum of E^2 with the 1/(2 pi) of the transform absorbed:
/// (1/(pi |l|!)) (w^{2|l|} / 2^{3|l|+1}) q^{2|l|} e^{-q^2 w^2/8} e^{-2 i l phi}.
std::complex<double> pump_sum_spectrum(double q_plus, double phi_plus, double waist, int oam);

/// sinc(L q^2 / (8 k)). Even in q.
double phase_matching_sinc(double q_minus, double cell_length, double wavenumber);

class SincApprox {
 public:
  static constexpr double default_a = 0.39;
  static constexpr double default_b = 0.49;

  SincApprox() = default;
  /// Throws DomainError unless a > 0 and b > 0.
  SincApprox(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }

  friend bool operator==(const SincApprox&, const SincApprox&) = default;

 private:
  double a_ = default_a;
  double b_ = default_b;
};

/// cos(a x^2) e^{-b x^2}, the stand-in for sinc(x^2).
double cos_gauss_sinc(double x, const SincApprox& approx);

struct SincFitOptions {
  /// Fit range in u = x^2.
  double u_min = 0.0;
  double u_max = 2.0 * 3.14159265358979323846;
  double start_a = SincApprox::default_a;
  double start_b = SincApprox::default_b;
  int max_iterations = 2000;
  /// Simplex size at which the search stops.
  double tolerance = 1e-10;
};

struct SincFit {
  /// Best (a, b). Left unvalidated so ill-conditioned or iteration-capped
  /// fits can still be reported.
  double a = 0.0;
  double b = 0.0;
  /// Mean squared misfit (1/(u_max - u_min)) int (sinc(u) - cos(a u) e^{-b u})^2 du.
  double objective = 0.0;
  int iterations = 0;
  /// Smallest Hessian eigenvalue of the objective at the optimum.
  double hessian_min_eigenvalue = 0.0;
  /// Set when the optimum is not pinned down by the data (flat direction).
  bool ill_conditioned = false;

  SincApprox approx() const { return SincApprox(a, b); }
};

class SincFitError : public ConvergenceError {
 public:
  SincFitError(const std::string& what, SincFit best)
      : ConvergenceError(what, best.objective, best.objective), best_(best) {}
  const SincFit& best() const { return best_; }

 private:
  SincFit best_;
};

/// The misfit objective of fit_sinc_approx at (a, b), any real a, b.
double sinc_fit_objective(double a, double b, double u_min, double u_max);

/// Nelder-Mead search for (a, b) minimizing the mean squared misfit over the
/// range. Throws DomainError for an empty or reversed range and SincFitError
/// (carrying the best iterate) when the iteration cap is hit.
SincFit fit_sinc_approx(const SincFitOptions& options = {});

}  // namespace twinbeam
