#pragma once

// Quadrature oracle for the closed-form amplitude chain. Everything here is
// evaluated from the radial momentum integrals with the self-contained Bessel
// functions, never from the closed forms it is meant to check.

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/core_model.hpp"
#include "twinbeam/pump_phasematch.hpp"
#include "twinbeam/quadrature.hpp"

namespace twinbeam {

enum class SincMode { exact, cos_gauss };

struct RadialProfile {
  std::vector<double> radii;  ///< strictly increasing, starting at 0
  std::vector<std::complex<double>> values;
  int order = 0;  ///< azimuthal order of the Bessel kernel

  void validate() const;
};

/// |sum_{|n|<=n_max} i^n J_n(rho) e^{i n phi} - e^{i rho cos phi}|.
double jacobi_anger_residual(double rho, double phi, int n_max);

struct IntegralCheck {
  std::complex<double> quadrature;
  std::complex<double> closed_form;
  /// |quadrature - closed| / |closed|, or the absolute difference when the
  /// closed form vanishes.
  double residual = 0.0;
};

/// int_0^inf t e^{-p2 t^2} J_nu(a t) J_nu(b t) dt against
/// e^{-(a^2+b^2)/(4 p2)} I_nu(a b / (2 p2)) / (2 p2). Needs Re p2 > 0.
IntegralCheck verify_weber_integral(int nu, double a, double b, std::complex<double> p2, const QuadratureSpec& spec);

/// int_0^inf t^{nu+1} I_nu(b t) e^{-p2 t^2} dt against
/// b^nu e^{b^2/(4 p2)} / (2 p2)^{nu+1}. Needs Re p2 > 0.
IntegralCheck verify_gaussian_moment_integral(int nu, std::complex<double> b, std::complex<double> p2,
                                              const QuadratureSpec& spec);

struct HomotopyCheck {
  std::vector<double> s;
  std::vector<IntegralCheck> checks;
  double max_residual = 0.0;
  /// Largest relative change of the closed form between neighbouring steps.
  double max_step_change = 0.0;
};

/// Walks p2(s) = Re p2 + i s Im p2 (and b(s) = |b| e^{i s arg b} where b is
/// complex) from real parameters at s = 0 to the target at s = 1.
HomotopyCheck weber_homotopy(int nu, double a, double b, std::complex<double> p2, int steps,
                             const QuadratureSpec& spec);
HomotopyCheck gaussian_moment_homotopy(int nu, std::complex<double> b, std::complex<double> p2, int steps,
                                       const QuadratureSpec& spec);

/// int_0^inf q^{2|l|+1} e^{-(w^2/8 + i z/4k) q^2} I_{2l}(i q rho/2) dq, the
/// sum-coordinate factor after propagation to z.
std::complex<double> sum_coordinate_integral(double rho_plus, double z, const PumpParams& pump,
                                             const QuadratureSpec& spec);

/// int_0^inf q e^{-i z q^2/4k} S(L q^2/8k) J_0(q rho/2) dq with S the exact
/// sinc or its cosine-Gaussian stand-in. The exact mode integrates the
/// oscillatory tail lobe by lobe and accelerates the partial sums.
std::complex<double> difference_coordinate_integral(double rho_minus, double z, const PumpParams& pump,
                                                    const MediumParams& medium, const SincApprox& approx,
                                                    SincMode mode, const QuadratureSpec& spec);

/// Unpropagated position-basis amplitude
///   -C e^{-2 i l theta+} int q^{2|l|+1} e^{-q^2 w^2/8} J_2l(q rho+/2) dq
///      x int q S(L q^2/8k) J_0(q rho-/2) dq,   C = w^{2|l|} / (pi |l|! 2^{3|l|+2}).
std::complex<double> position_amplitude_quadrature(Vec2 rho_plus, double rho_minus, const PumpParams& pump,
                                                   const MediumParams& medium, const SincApprox& approx,
                                                   SincMode mode, const QuadratureSpec& spec);

/// Propagated amplitude from the momentum integrals,
///   4C e^{-2 i l theta'+} e^{2ikz} [sum-coordinate integral] [difference-coordinate integral].
std::complex<double> propagated_amplitude_quadrature(Vec2 rho_plus, double rho_minus, const Plane& plane,
                                                     const PumpParams& pump, const MediumParams& medium,
                                                     const SincApprox& approx, SincMode mode,
                                                     const QuadratureSpec& spec);

enum class ReducedFactor { sum, difference };

/// Radial profile of one propagated factor: 4C e^{2ikz} times the
/// sum-coordinate integral (at theta'+ = 0), or the difference-coordinate
/// integral. Radii are evaluated independently.
RadialProfile radial_oracle(ReducedFactor factor, std::span<const double> radii, const Plane& plane,
                            const PumpParams& pump, const MediumParams& medium, const SincApprox& approx,
                            SincMode mode, const QuadratureSpec& spec, int threads = 1);

/// Difference factor at one plane tabulated from the quadrature on `samples`
/// radii in [0, r_max], for TwoPhotonAmplitude::use_difference_table.
std::shared_ptr<const RadialTable> difference_table(const Plane& plane, const PumpParams& pump,
                                                    const MediumParams& medium, const SincApprox& approx,
                                                    SincMode mode, double r_max, int samples,
                                                    const QuadratureSpec& spec, int threads = 1);

/// Relative L2 distance after scaling each array by its own element of
/// largest magnitude (removes global constants and phases).
double normalized_l2_error(std::span<const std::complex<double>> value, std::span<const std::complex<double>> reference);
double normalized_l2_error(std::span<const double> value, std::span<const double> reference);

}  // namespace twinbeam
