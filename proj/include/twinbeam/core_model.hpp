#pragma once

// Physical parameters, unit conventions and coordinate transforms shared by
// every other module. All quantities are strict SI (m, rad/m); convenience
// units are converted at the CLI boundary only.

#include <cmath>
#include <numbers>

namespace twinbeam {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  /// Azimuth in [0, 2pi).
  double azimuth() const;
  Vec2 rotated(double angle) const;
};

Vec2 from_polar(double radius, double azimuth);

/// Rayleigh range pi w^2 / lambda. Throws DomainError for non-positive input.
double rayleigh_range(double waist, double wavelength);

/// OAM carried by the conjugate: l_c = 2 l_pump - l_probe.
constexpr int conjugate_oam(int l_pump, int l_probe) { return 2 * l_pump - l_probe; }

/// Largest |l| accepted anywhere in the model.
inline constexpr int max_oam_index = 20;

class PumpParams {
 public:
  /// Throws DomainError when waist or wavelength is not positive or |l| > 20.
  PumpParams(double waist, double wavelength, int oam);

  double waist() const { return waist_; }
  double wavelength() const { return wavelength_; }
  int oam() const { return oam_; }
  double wavenumber() const { return wavenumber_; }
  double rayleigh_range() const { return rayleigh_range_; }

 private:
  double waist_;
  double wavelength_;
  int oam_;
  double wavenumber_;
  double rayleigh_range_;
};

/// Nonlinear medium. The pump-probe angle is recorded only: the
/// k_p sin^2(theta) mismatch term is dropped in the small-angle limit.
class MediumParams {
 public:
  static constexpr bool angle_mismatch_neglected = true;

  explicit MediumParams(double cell_length, double pump_probe_angle = 0.0);

  double cell_length() const { return cell_length_; }
  double pump_probe_angle() const { return pump_probe_angle_; }

 private:
  double cell_length_;
  double pump_probe_angle_;
};

/// Observation plane at distance z from the cell exit.
class Plane {
 public:
  Plane(double z, const PumpParams& pump);
  static Plane in_rayleigh_units(double z_over_zr, const PumpParams& pump);

  double z() const { return z_; }
  double z_over_zr() const { return z_over_zr_; }

 private:
  double z_;
  double z_over_zr_;
};

/// Sum/difference transverse coordinates. The same structure holds the
/// source-plane (rho) and propagated-plane (rho') variants.
struct ReducedCoords {
  Vec2 plus;   ///< rho_pr + rho_c
  Vec2 minus;  ///< rho_pr - rho_c

  double rho_plus() const { return plus.norm(); }
  double rho_minus() const { return minus.norm(); }
  double theta_plus() const { return plus.azimuth(); }
  double theta_minus() const { return minus.azimuth(); }
};

struct BeamPair {
  Vec2 probe;
  Vec2 conjugate;
};

ReducedCoords to_reduced(Vec2 probe, Vec2 conjugate);
BeamPair from_reduced(const ReducedCoords& reduced);

/// Centered uniform grid on [-half_extent, half_extent].
class Grid2D {
 public:
  Grid2D(int n_points, double half_extent);

  int size() const { return n_; }
  double half_extent() const { return half_extent_; }
  double spacing() const { return spacing_; }
  /// Exactly antisymmetric about the center; exactly 0 at the center when n is odd.
  double coordinate(int i) const { return half_extent_ * (2.0 * i - (n_ - 1)) / (n_ - 1); }
  /// Index of the sample nearest to value, clamped to the grid.
  int nearest_index(double value) const;
  bool has_origin() const { return n_ % 2 == 1; }
  /// Same extent, half the spacing (2n - 1 points).
  Grid2D refined() const { return Grid2D(2 * n_ - 1, half_extent_); }

 private:
  int n_;
  double half_extent_;
  double spacing_;
};

}  // namespace twinbeam
