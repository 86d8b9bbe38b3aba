#pragma once

// Closed-form two-photon amplitudes: the momentum-basis product of pump
// spectrum and phase matching, and the propagated position-basis form that
// factorizes into a sum-coordinate part and a difference-coordinate part.

#include <complex>
#include <memory>
#include <vector>

#include "twinbeam/core_model.hpp"
#include "twinbeam/pump_phasematch.hpp"

namespace twinbeam {

/// Coefficients of the propagated amplitude at one plane.
struct AmplitudeCoefficients {
  std::complex<double> alpha;  ///< 1 / (w^2/8 + i z/(4k)), 1/m^2
  double beta = 0.0;           ///< b L / (8k), m^2
  double gamma_plus = 0.0;     ///< z/(4k) + a L/(8k), m^2
  double gamma_minus = 0.0;    ///< z/(4k) - a L/(8k), m^2; negative for z < aL/2
  double c_prime = 0.0;        ///< w^{2|l|} / (pi |l|! 2^{5|l|+1})
  double log_c_prime = 0.0;

  static AmplitudeCoefficients compute(const Plane& plane, const PumpParams& pump, const MediumParams& medium,
                                       const SincApprox& approx);
};

/// Momentum-basis amplitude: pump spectrum at q_pr + q_c times the exact
/// phase-matching sinc at |q_pr - q_c|.
std::complex<double> momentum_amplitude(Vec2 q_probe, Vec2 q_conjugate, const PumpParams& pump,
                                        const MediumParams& medium);

/// A radial function sampled at r_max * i / (n - 1), cubic in between and
/// zero beyond r_max.
struct RadialTable {
  double r_max = 0.0;
  std::vector<std::complex<double>> values;

  std::complex<double> operator()(double r) const;
};

/// Propagated two-photon amplitude at one plane.
///
/// F = G+(rho'+) G-(|rho'-|) with
///   G+ = C' (w^2/4 + i z/2k)^{-(2|l|+1)} (rho'+)^{2|l|} e^{-2 i l theta'+} e^{2ikz}
///        exp(-rho'+^2 / (16 (w^2/8 + i z/4k)))
///   G- = sum_{s=+,-} exp(-rho'-^2 / (16 (beta + i gamma_s))) / (2 (beta + i gamma_s)).
/// Relative to the unpropagated position-basis amplitude this form carries a
/// global factor -4 (sign plus Jacobian bookkeeping of the sum/difference
/// change of variables). It drops out of every normalized quantity.
class TwoPhotonAmplitude {
 public:
  TwoPhotonAmplitude(const Plane& plane, const PumpParams& pump, const MediumParams& medium,
                     const SincApprox& approx = {});

  const Plane& plane() const { return plane_; }
  const PumpParams& pump() const { return pump_; }
  const MediumParams& medium() const { return medium_; }
  const SincApprox& approx() const { return approx_; }
  const AmplitudeCoefficients& coefficients() const { return coeffs_; }

  /// G+ at the sum-coordinate vector rho'+ (m).
  std::complex<double> sum_factor(Vec2 rho_plus) const;
  /// G- at |rho'-| (m).
  std::complex<double> difference_factor(double rho_minus) const;
  /// |G+|^2 as a function of |rho'+| alone.
  double sum_intensity(double rho_plus) const;
  /// log |G+|^2; -inf at rho'+ = 0 for l != 0.
  double log_sum_intensity(double rho_plus) const;

  std::complex<double> propagated(Vec2 probe, Vec2 conjugate) const;
  double probability(Vec2 probe, Vec2 conjugate) const { return std::norm(propagated(probe, conjugate)); }
  /// log |F|^2, finite wherever |F|^2 itself would underflow.
  double log_probability(Vec2 probe, Vec2 conjugate) const;

  /// Replaces the closed-form G- (e.g. by the exact-sinc quadrature); null restores it.
  void use_difference_table(std::shared_ptr<const RadialTable> table) { difference_table_ = std::move(table); }
  bool has_difference_table() const { return difference_table_ != nullptr; }

  /// 1/e^2 intensity radius of |G-|^2 for the slower-decaying bracket term.
  double difference_radius_estimate() const;
  /// 1/e^2 radius of the Gaussian envelope of |G+|^2 (exact for l = 0).
  double sum_radius_estimate() const;

 private:
  Plane plane_;
  PumpParams pump_;
  MediumParams medium_;
  SincApprox approx_;
  AmplitudeCoefficients coeffs_;
  std::complex<double> sum_base_log_;  ///< Log(w^2/4 + iz/2k)
  std::complex<double> p2_plus_;       ///< w^2/8 + iz/4k
  std::shared_ptr<const RadialTable> difference_table_;
};

/// Difference factor with bracket weights 1/(4 beta + i gamma_s) instead of
/// 1/(2 (beta + i gamma_s)). Not the propagated momentum form; kept so the
/// oracle can show that the weights matter.
std::complex<double> difference_factor_unequal_weights(const AmplitudeCoefficients& c, double rho_minus);

}  // namespace twinbeam
