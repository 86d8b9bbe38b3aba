#pragma once

// FFT Fresnel propagation in the reduced (sum/difference) planes.
//
// With rho+- = rho_pr +- rho_c the pair of Fresnel kernels becomes
// exp(i k |d+|^2 / 4z) exp(i k |d-|^2 / 4z), and dA_pr dA_c = dA_+ dA_- / 4.
// That is two ordinary unitary Fresnel transforms at k_eff = k/2 whose
// prefactors (k_eff / 2 pi i z)^2 absorb the 1/4 exactly:
//   F(z) = e^{2ikz} Q[f+](rho'+) Q[f-](rho'-).

#include <complex>
#include <vector>

#include "twinbeam/core_model.hpp"
#include "twinbeam/oracle.hpp"
#include "twinbeam/pump_phasematch.hpp"
#include "twinbeam/quadrature.hpp"

namespace twinbeam {

/// Square FFT grid with samples at (i - n/2) * spacing, i in [0, n); values
/// stored row-major with x fastest.
struct FftGrid {
  int n = 0;
  double spacing = 0.0;
  std::vector<std::complex<double>> values;

  FftGrid() = default;
  FftGrid(int n, double spacing);

  double coordinate(int i) const { return (i - n / 2) * spacing; }
  std::complex<double>& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * n + ix]; }
  const std::complex<double>& at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * n + ix]; }
  /// sum |f|^2 spacing^2
  double energy() const;
};

/// Output spacing 2 pi z / (k_eff n d) of the single-FFT Fresnel transform.
double fresnel_output_spacing(double source_spacing, int n, double z, double k_eff);

/// Unitary Fresnel propagation over distance z at wavenumber k_eff.
/// Throws SamplingError when the source chirp is undersampled
/// (k_eff n d^2 / 2z > pi) or when |f| on the source boundary exceeds
/// boundary_tolerance times its maximum.
FftGrid fresnel_fft(const FftGrid& source, double z, double k_eff, double boundary_tolerance = 1e-4);

struct FftGridSuggestion {
  int n = 0;
  double spacing_plus = 0.0;
  double spacing_minus = 0.0;
};

/// Source spacings that keep the chirp sampled and both factors resolved on
/// the source and propagated grids.
FftGridSuggestion suggest_fft_grids(const Plane& plane, const PumpParams& pump, const MediumParams& medium, int n);

struct ReducedSource {
  FftGrid plus;
  FftGrid minus;
};

/// Unpropagated amplitude factors sampled from the position-basis quadrature:
/// f+ carries the sum-coordinate part with its constants and phase, f- the
/// difference-coordinate integral. Each distinct radius is integrated once.
ReducedSource sample_reduced_source(const FftGridSuggestion& grids, const PumpParams& pump, const MediumParams& medium,
                                    const SincApprox& approx, SincMode mode, const QuadratureSpec& spec,
                                    int threads = 1);

struct FftCrossCheck {
  FftGrid plus;   ///< propagated sum-coordinate factor
  FftGrid minus;  ///< propagated difference-coordinate factor
  /// Relative L2 of the normalized 4-D |F|^2 on the output grids against the
  /// closed form sampled at the same points.
  double closed_form_l2 = 0.0;
  /// Same for the difference factor along +x against the radial quadrature.
  double radial_oracle_l2 = 0.0;
  /// int |F(z)|^2 / int |F(0)|^2 over the grids.
  double energy_ratio = 0.0;
};

FftCrossCheck fft_cross_check(const Plane& plane, const PumpParams& pump, const MediumParams& medium,
                              const SincApprox& approx, int n, const QuadratureSpec& spec, int threads = 1);

}  // namespace twinbeam
