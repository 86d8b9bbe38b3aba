#pragma once

#include <vector>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/core_model.hpp"

namespace fixtures {

inline constexpr double waist = 0.55e-3;
inline constexpr double wavelength = 795e-9;
inline constexpr double cell_length = 12e-3;
inline constexpr double z_presets[] = {0.0008, 0.025, 0.042, 0.083, 0.5, 0.83};

inline twinbeam::PumpParams pump(int l = 0) { return twinbeam::PumpParams(waist, wavelength, l); }
inline twinbeam::MediumParams medium() { return twinbeam::MediumParams(cell_length); }
inline twinbeam::Plane plane(double z_over_zr, int l = 0) { return twinbeam::Plane::in_rayleigh_units(z_over_zr, pump(l)); }
inline twinbeam::TwoPhotonAmplitude amplitude(double z_over_zr, int l = 0) {
  return twinbeam::TwoPhotonAmplitude(plane(z_over_zr, l), pump(l), medium());
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace fixtures
