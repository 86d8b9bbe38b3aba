#include "twinbeam/core_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "twinbeam/errors.hpp"

namespace twinbeam {

double Vec2::azimuth() const {
  double a = std::atan2(y, x);
  if (a < 0.0) a += two_pi;
  // atan2 of (-0, negative) can land exactly on 2pi after the shift
  if (a >= two_pi) a -= two_pi;
  return a;
}

Vec2 Vec2::rotated(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * x - s * y, s * x + c * y};
}

Vec2 from_polar(double radius, double azimuth) {
  return {radius * std::cos(azimuth), radius * std::sin(azimuth)};
}

double rayleigh_range(double waist, double wavelength) {
  if (!(waist > 0.0) || !(wavelength > 0.0) || !std::isfinite(waist) || !std::isfinite(wavelength)) {
    throw DomainError("rayleigh_range: waist and wavelength must be positive and finite");
  }
  return pi * waist * waist / wavelength;
}

PumpParams::PumpParams(double waist, double wavelength, int oam)
    : waist_(waist), wavelength_(wavelength), oam_(oam) {
  if (!(waist > 0.0) || !std::isfinite(waist)) throw DomainError("pump waist must be positive");
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw DomainError("pump wavelength must be positive");
  if (std::abs(oam) > max_oam_index) {
    throw DomainError("pump OAM index |l| = " + std::to_string(std::abs(oam)) + " exceeds 20");
  }
  wavenumber_ = two_pi / wavelength;
  rayleigh_range_ = twinbeam::rayleigh_range(waist, wavelength);
}

MediumParams::MediumParams(double cell_length, double pump_probe_angle)
    : cell_length_(cell_length), pump_probe_angle_(pump_probe_angle) {
  if (!(cell_length > 0.0) || !std::isfinite(cell_length)) throw DomainError("cell length must be positive");
  if (!(pump_probe_angle >= 0.0) || !std::isfinite(pump_probe_angle)) {
    throw DomainError("pump-probe angle must be non-negative");
  }
}

Plane::Plane(double z, const PumpParams& pump) : z_(z), z_over_zr_(z / pump.rayleigh_range()) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("plane distance z must be >= 0");
}

Plane Plane::in_rayleigh_units(double z_over_zr, const PumpParams& pump) {
  return Plane(z_over_zr * pump.rayleigh_range(), pump);
}

ReducedCoords to_reduced(Vec2 probe, Vec2 conjugate) {
  return {probe + conjugate, probe - conjugate};
}

BeamPair from_reduced(const ReducedCoords& reduced) {
  return {0.5 * (reduced.plus + reduced.minus), 0.5 * (reduced.plus - reduced.minus)};
}

Grid2D::Grid2D(int n_points, double half_extent) : n_(n_points), half_extent_(half_extent) {
  if (n_points < 2) throw DomainError("grid needs at least 2 points per axis");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) throw DomainError("grid half extent must be positive");
  spacing_ = 2.0 * half_extent / (n_points - 1);
}

int Grid2D::nearest_index(double value) const {
  const long i = std::lround((value + half_extent_) / spacing_);
  return static_cast<int>(std::clamp<long>(i, 0, n_ - 1));
}

}  // namespace twinbeam
