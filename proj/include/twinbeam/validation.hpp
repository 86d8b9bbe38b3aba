#pragma once

// The oracle/identity suite behind `twinbeam validate`: standard-integral
// residuals, closed form against the momentum quadrature, and the FFT
// Fresnel cross-check.

#include <string>
#include <vector>

#include "twinbeam/core_model.hpp"
#include "twinbeam/pump_phasematch.hpp"
#include "twinbeam/quadrature.hpp"

namespace twinbeam {

struct CheckResult {
  std::string name;
  std::string parameters;
  double value = 0.0;
  double tolerance = 0.0;
  /// true: pass when value < tolerance; false: pass when value > tolerance.
  bool upper_bound = true;
  bool pass = false;
};

CheckResult make_check(std::string name, std::string parameters, double value, double tolerance,
                       bool upper_bound = true);

/// Weber and Gaussian-moment integrals at real parameters and along complex
/// homotopies (including the physical p^2 of the model), plus Jacobi-Anger.
std::vector<CheckResult> integral_identity_checks(const PumpParams& pump, const QuadratureSpec& spec);

/// Normalized relative L2 between the closed-form amplitude and the momentum
/// quadrature on a radii x radii product grid of (|rho'+|, |rho'-|).
CheckResult arbitration_check(double z_over_zr, int oam, const PumpParams& pump, const MediumParams& medium,
                              const SincApprox& approx, const QuadratureSpec& spec, int threads = 1,
                              int radii = 32);

/// The alternative bracket weights must miss the quadrature by more than 1e-3.
CheckResult bracket_weight_check(double z_over_zr, const PumpParams& pump, const MediumParams& medium,
                                 const SincApprox& approx, const QuadratureSpec& spec, int threads = 1);

/// FFT Fresnel propagation against the closed form and the radial oracle,
/// and its energy conservation.
std::vector<CheckResult> fft_checks(double z_over_zr, int oam, int n, const PumpParams& pump,
                                    const MediumParams& medium, const SincApprox& approx,
                                    const QuadratureSpec& spec, int threads = 1);

struct ValidationOptions {
  std::vector<double> planes_z_over_zr{0.0008, 0.025, 0.083, 0.5, 0.83};
  std::vector<int> oams{0, 1};
  double fft_z_over_zr = 0.5;
  int fft_n = 128;
  QuadratureSpec spec;
  int threads = 1;
};

std::vector<CheckResult> run_validation_suite(const PumpParams& pump, const MediumParams& medium,
                                              const SincApprox& approx, const ValidationOptions& options = {});

}  // namespace twinbeam
