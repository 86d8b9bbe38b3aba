#include "twinbeam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twinbeam/errors.hpp"
#include "twinbeam/parallel.hpp"

namespace twinbeam {

namespace {

std::string format_fixed(const char* a, double va, const char* b, double vb) {
  std::ostringstream s;
  s.precision(17);
  s << a << '=' << va << ' ' << b << '=' << vb;
  return s.str();
}

// Fills log|F|^2 row by row, then exponentiates relative to the largest finite value.
template <class LogValue>
DistributionMap fill_map(const TwoPhotonAmplitude& amplitude, const Grid2D& grid, int threads, LogValue&& log_value) {
  DistributionMap map{grid, {}, {}, {}, {}, amplitude.plane().z(), amplitude.plane().z_over_zr(),
                      amplitude.pump().oam()};
  const int n = grid.size();
  map.values.resize(static_cast<std::size_t>(n) * n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iy) {
    const double v = grid.coordinate(static_cast<int>(iy));
    for (int ix = 0; ix < n; ++ix) map.values[iy * n + ix] = log_value(grid.coordinate(ix), v);
  });
  double top = -std::numeric_limits<double>::infinity();
  for (double lv : map.values)
    if (std::isfinite(lv)) top = std::max(top, lv);
  if (!std::isfinite(top)) throw DegenerateError("distribution map is identically zero on the grid");
  for (double& lv : map.values) lv = std::isnan(lv) ? 0.0 : std::exp(lv - top);
  return map;
}

}  // namespace

void normalize(DistributionMap& map) {
  const double top = *std::max_element(map.values.begin(), map.values.end());
  if (!(top > 0.0)) throw DegenerateError("distribution map is identically zero on the grid");
  for (double& v : map.values) v /= top;
}

DistributionMap joint_slice(const TwoPhotonAmplitude& amplitude, double x_probe, double x_conjugate, const Grid2D& grid,
                            int threads) {
  DistributionMap map = fill_map(amplitude, grid, threads, [&](double y_pr, double y_c) {
    return amplitude.log_probability({x_probe, y_pr}, {x_conjugate, y_c});
  });
  map.axis_x = "y_pr";
  map.axis_y = "y_c";
  map.fixed = format_fixed("x_pr", x_probe, "x_c", x_conjugate);
  return map;
}

DistributionMap conditional_map(const TwoPhotonAmplitude& amplitude, Vec2 probe, const Grid2D& grid, int threads) {
  DistributionMap map = fill_map(amplitude, grid, threads, [&](double x_c, double y_c) {
    return amplitude.log_probability(probe, {x_c, y_c});
  });
  map.axis_x = "x_c";
  map.axis_y = "y_c";
  map.fixed = format_fixed("x_pr", probe.x, "y_pr", probe.y);
  return map;
}

LineProfile line_profile(const DistributionMap& map) {
  if (!map.grid.has_origin()) throw DomainError("line_profile needs an odd grid so that the y = 0 row exists");
  const int n = map.grid.size();
  const int row = (n - 1) / 2;
  LineProfile p;
  p.zero_index = row;
  p.coordinates.resize(n);
  p.values.resize(n);
  for (int ix = 0; ix < n; ++ix) {
    p.coordinates[ix] = map.grid.coordinate(ix);
    p.values[ix] = map.at(ix, row);
  }
  const double top = *std::max_element(p.values.begin(), p.values.end());
  if (!(top > 0.0)) throw DegenerateError("line profile is identically zero");
  for (double& v : p.values) v /= top;
  return p;
}

double width_1e2(const LineProfile& profile) {
  const auto& x = profile.coordinates;
  const auto& v = profile.values;
  if (x.size() != v.size() || x.size() < 3) throw DomainError("width_1e2: need matching coordinates and values");
  const double top = *std::max_element(v.begin(), v.end());
  if (!(top > 0.0)) throw DegenerateError("width_1e2: profile is identically zero");
  const double level = inv_e2 * top;
  const std::size_t n = v.size();
  std::size_t first = 0;
  while (first < n && v[first] < level) ++first;
  std::size_t last = n - 1;
  while (last > 0 && v[last] < level) --last;
  if (first == 0 || last == n - 1)
    throw DegenerateError("width_1e2: profile does not fall to 1/e^2 inside the grid; widen the grid");
  auto cross = [&](std::size_t lo, std::size_t hi) {
    return x[lo] + (level - v[lo]) / (v[hi] - v[lo]) * (x[hi] - x[lo]);
  };
  return cross(last + 1, last) - cross(first - 1, first);
}

CoherenceAreaResult coherence_area(const DistributionMap& map) {
  const double top = *std::max_element(map.values.begin(), map.values.end());
  if (!(top > 0.0)) throw DegenerateError("coherence_area: map is identically zero");
  CoherenceAreaResult r;
  const double level = r.threshold * top;
  r.pixel_count = std::count_if(map.values.begin(), map.values.end(), [&](double v) { return v > level; });
  r.spacing = map.grid.spacing();
  r.grid_points = map.grid.size();
  r.area = static_cast<double>(r.pixel_count) * r.spacing * r.spacing;
  return r;
}

CoherenceAreaResult coherence_area_checked(const std::function<DistributionMap(const Grid2D&)>& build,
                                           const Grid2D& grid) {
  CoherenceAreaResult r = coherence_area(build(grid));
  const CoherenceAreaResult fine = coherence_area(build(grid.refined()));
  r.refined_area = fine.area;
  r.converged = std::abs(fine.area / r.area - 1.0) < 0.05;
  return r;
}

PeakLocation peak_location(const DistributionMap& map) {
  const int n = map.grid.size();
  const auto it = std::max_element(map.values.begin(), map.values.end());
  if (!(*it > 0.0)) throw DegenerateError("peak_location: map is identically zero");
  const auto idx = static_cast<int>(it - map.values.begin());
  PeakLocation p;
  p.argmax = {map.grid.coordinate(idx % n), map.grid.coordinate(idx / n)};
  double s = 0.0, sx = 0.0, sy = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double v = map.at(ix, iy);
      s += v;
      sx += v * map.grid.coordinate(ix);
      sy += v * map.grid.coordinate(iy);
    }
  }
  p.centroid = {sx / s, sy / s};
  return p;
}

double sample_bilinear(const DistributionMap& map, Vec2 p) {
  const int n = map.grid.size();
  const double h = map.grid.half_extent();
  const double fx = (p.x + h) / map.grid.spacing();
  const double fy = (p.y + h) / map.grid.spacing();
  if (fx < 0.0 || fy < 0.0 || fx > n - 1 || fy > n - 1) throw DomainError("sample_bilinear: point outside the grid");
  const int ix = std::min(static_cast<int>(fx), n - 2);
  const int iy = std::min(static_cast<int>(fy), n - 2);
  const double tx = fx - ix;
  const double ty = fy - iy;
  return (1 - tx) * (1 - ty) * map.at(ix, iy) + tx * (1 - ty) * map.at(ix + 1, iy) +
         (1 - tx) * ty * map.at(ix, iy + 1) + tx * ty * map.at(ix + 1, iy + 1);
}

RingScan ring_scan(const DistributionMap& map, Vec2 center, int radial_samples, int azimuthal_samples) {
  if (radial_samples < 2 || azimuthal_samples < 4) throw DomainError("ring_scan: too few samples");
  const double h = map.grid.half_extent();
  const double reach = std::min({h - center.x, h + center.x, h - center.y, h + center.y});
  if (!(reach > 0.0)) throw DomainError("ring_scan: center outside the grid");
  RingScan out;
  out.center_value = sample_bilinear(map, center);
  double best_mean = -1.0;
  for (int ir = 1; ir <= radial_samples; ++ir) {
    const double r = reach * ir / radial_samples * (1.0 - 1e-12);
    double mean = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int ia = 0; ia < azimuthal_samples; ++ia) {
      const double v = sample_bilinear(map, center + from_polar(r, two_pi * ia / azimuthal_samples));
      mean += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean /= azimuthal_samples;
    if (mean > best_mean) {
      best_mean = mean;
      out.radius = r;
      out.ring_max = hi;
      out.ring_min = lo;
    }
  }
  out.contrast = out.ring_min > 0.0 ? out.ring_max / out.ring_min : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<std::pair<Vec2, double>> local_maxima(const DistributionMap& map, double floor) {
  const int n = map.grid.size();
  std::vector<std::pair<Vec2, double>> candidates;
  for (int iy = 1; iy < n - 1; ++iy) {
    for (int ix = 1; ix < n - 1; ++ix) {
      const double v = map.at(ix, iy);
      if (v <= floor) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy)
        for (int dx = -1; dx <= 1 && peak; ++dx)
          if (map.at(ix + dx, iy + dy) > v) peak = false;
      if (peak) candidates.push_back({{map.grid.coordinate(ix), map.grid.coordinate(iy)}, v});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  // ties between neighbours (exchange-symmetric slices put mirror pixels side by side) count once
  const double merge = 1.5 * map.grid.spacing();
  std::vector<std::pair<Vec2, double>> out;
  for (const auto& c : candidates) {
    const bool near = std::any_of(out.begin(), out.end(), [&](const auto& o) { return (o.first - c.first).norm() < merge; });
    if (!near) out.push_back(c);
  }
  return out;
}

double preset_half_extent(double z_over_zr) {
  if (!(z_over_zr >= 0.0)) throw DomainError("preset_half_extent: z must be non-negative");
  return 0.5e-3 + 5.5e-3 * std::sqrt(z_over_zr / 0.83);
}

Grid2D preset_grid(double z_over_zr, int n) { return Grid2D(n, preset_half_extent(z_over_zr)); }

std::vector<CoherencePoint> coherence_curve(std::span<const double> z_over_zr, std::span<const int> pump_oam,
                                            const PumpParams& pump, const MediumParams& medium,
                                            const SincApprox& approx, const CoherenceCurveOptions& options) {
  std::vector<CoherencePoint> out;
  for (double zr : z_over_zr) {
    const Grid2D grid(options.grid_points, options.half_extent.value_or(preset_half_extent(zr)));
    for (int l : pump_oam) {
      const PumpParams p(pump.waist(), pump.wavelength(), l);
      const TwoPhotonAmplitude amplitude(Plane::in_rayleigh_units(zr, p), p, medium, approx);
      auto build = [&](const Grid2D& g) { return conditional_map(amplitude, options.probe, g, options.threads); };
      CoherencePoint pt;
      pt.z = amplitude.plane().z();
      pt.z_over_zr = zr;
      pt.oam = l;
      pt.result = options.check_refinement ? coherence_area_checked(build, grid) : coherence_area(build(grid));
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace twinbeam
