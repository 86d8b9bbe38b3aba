#pragma once

// Observables built from |F|^2: joint slices, conditional maps, line
// profiles, 1/e^2 widths, coherence areas and their z dependence.

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/core_model.hpp"

namespace twinbeam {

/// e^{-2}, the relative level used for widths and coherence areas.
inline const double inv_e2 = std::exp(-2.0);

/// Square map on one Grid2D for both axes, normalized so the maximum is 1.
/// values[iy * n + ix] is the sample at (coordinate(ix), coordinate(iy)).
struct DistributionMap {
  Grid2D grid;
  std::vector<double> values;
  std::string axis_x;  ///< scanned coordinate along ix, e.g. "x_c"
  std::string axis_y;  ///< scanned coordinate along iy
  std::string fixed;   ///< coordinates held fixed, e.g. "x_pr=0.00025 y_pr=0"
  double z = 0.0;
  double z_over_zr = 0.0;
  int oam = 0;

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.size() + ix]; }
};

/// Divides by the maximum. Throws DegenerateError when all values are zero.
void normalize(DistributionMap& map);

/// |F|^2 over (y_pr, y_c) with x_pr and x_c held fixed.
DistributionMap joint_slice(const TwoPhotonAmplitude& amplitude, double x_probe, double x_conjugate, const Grid2D& grid,
                            int threads = 1);

/// |F|^2 over the conjugate plane with the probe held at `probe`.
DistributionMap conditional_map(const TwoPhotonAmplitude& amplitude, Vec2 probe, const Grid2D& grid, int threads = 1);

struct LineProfile {
  std::vector<double> coordinates;
  std::vector<double> values;  ///< renormalized to max 1
  int zero_index = -1;         ///< index of coordinate 0 (the x_c = 0 marker)
};

/// Row iy = centre of the map (y = 0). Requires an odd grid.
LineProfile line_profile(const DistributionMap& map);

/// Extent between the outermost e^{-2} crossings, linearly interpolated.
/// Throws DegenerateError if the profile does not fall below e^{-2} at both ends.
double width_1e2(const LineProfile& profile);

struct CoherenceAreaResult {
  double area = 0.0;  ///< pixel_count * spacing^2
  long pixel_count = 0;
  double threshold = inv_e2;
  double spacing = 0.0;
  int grid_points = 0;
  std::optional<double> refined_area;  ///< same map at 2n - 1 points
  std::optional<bool> converged;       ///< |refined / area - 1| < 5%
};

/// Counts pixels strictly above e^{-2} of the maximum.
CoherenceAreaResult coherence_area(const DistributionMap& map);

/// coherence_area plus the refinement check, rebuilding the map on grid.refined().
CoherenceAreaResult coherence_area_checked(const std::function<DistributionMap(const Grid2D&)>& build,
                                           const Grid2D& grid);

struct PeakLocation {
  Vec2 argmax;
  Vec2 centroid;
};

PeakLocation peak_location(const DistributionMap& map);

/// Bilinear interpolation of the map at an arbitrary point inside the grid.
double sample_bilinear(const DistributionMap& map, Vec2 p);

struct RingScan {
  double radius = 0.0;     ///< radius of the largest azimuthal mean
  double ring_max = 0.0;   ///< max along that circle
  double ring_min = 0.0;   ///< min along that circle
  double contrast = 0.0;   ///< ring_max / ring_min (inf if ring_min = 0)
  double center_value = 0.0;
};

/// Scans circles about `center` and reports the brightest one.
RingScan ring_scan(const DistributionMap& map, Vec2 center, int radial_samples = 200, int azimuthal_samples = 720);

/// Local maxima (no larger 8-neighbour) above `floor`, sorted by value;
/// adjacent equal pixels count as one maximum.
std::vector<std::pair<Vec2, double>> local_maxima(const DistributionMap& map, double floor);

/// Half extent used for analysis grids at a given z: 0.5 mm + 5.5 mm sqrt(z / 0.83 zR).
double preset_half_extent(double z_over_zr);
inline constexpr int preset_grid_points = 257;
Grid2D preset_grid(double z_over_zr, int n = preset_grid_points);

/// The fixed probe point of the figure presets: (0.25 mm, 0).
inline constexpr Vec2 preset_probe{0.25e-3, 0.0};

struct CoherencePoint {
  double z = 0.0;
  double z_over_zr = 0.0;
  int oam = 0;
  CoherenceAreaResult result;
};

struct CoherenceCurveOptions {
  Vec2 probe = preset_probe;
  int grid_points = preset_grid_points;
  /// Uses preset_half_extent when unset.
  std::optional<double> half_extent;
  bool check_refinement = true;
  int threads = 1;
};

/// Coherence area of the conditional map at each plane for each pump OAM.
std::vector<CoherencePoint> coherence_curve(std::span<const double> z_over_zr, std::span<const int> pump_oam,
                                            const PumpParams& pump, const MediumParams& medium,
                                            const SincApprox& approx, const CoherenceCurveOptions& options = {});

}  // namespace twinbeam
