#include "twinbeam/fresnel_fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/parallel.hpp"

namespace twinbeam {

using cd = std::complex<double>;

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double checkerboard(int i) { return i % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

FftGrid::FftGrid(int n_, double spacing_) : n(n_), spacing(spacing_), values(static_cast<std::size_t>(n_) * n_) {
  if (n_ < 4 || n_ % 2 != 0) throw DomainError("FFT grid size must be even and >= 4");
  if (!(spacing_ > 0.0)) throw DomainError("FFT grid spacing must be positive");
}

double FftGrid::energy() const {
  double s = 0.0;
  for (const cd& v : values) s += std::norm(v);
  return s * spacing * spacing;
}

double fresnel_output_spacing(double source_spacing, int n, double z, double k_eff) {
  return two_pi * z / (k_eff * n * source_spacing);
}

FftGrid fresnel_fft(const FftGrid& source, double z, double k_eff, double boundary_tolerance) {
  if (!(z > 0.0)) throw DomainError("fresnel_fft: z must be positive");
  const int n = source.n;
  const double d = source.spacing;
  const double chirp_step = k_eff * n * d * d / (2.0 * z);
  if (chirp_step > pi) {
    std::ostringstream msg;
    msg << "fresnel_fft: source chirp undersampled (k n d^2 / 2z = " << chirp_step
        << " > pi); use a finer spacing or fewer points";
    throw SamplingError(msg.str());
  }
  double peak = 0.0;
  double edge = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double m = std::abs(source.at(ix, iy));
      peak = std::max(peak, m);
      if (ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1) edge = std::max(edge, m);
    }
  }
  if (peak == 0.0) throw DegenerateError("fresnel_fft: source field is identically zero");
  if (edge > boundary_tolerance * peak) {
    std::ostringstream msg;
    msg << "fresnel_fft: field at the grid boundary is " << edge / peak
        << " of its maximum (limit " << boundary_tolerance << "); enlarge the source extent";
    throw SamplingError(msg.str());
  }

  const double d_out = fresnel_output_spacing(d, n, z, k_eff);
  FftGrid out(n, d_out);
  std::vector<cd> buffer(source.values.size());
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double x = source.coordinate(ix);
      const double y = source.coordinate(iy);
      const double chirp = k_eff * (x * x + y * y) / (2.0 * z);
      buffer[static_cast<std::size_t>(iy) * n + ix] =
          source.at(ix, iy) * std::polar(checkerboard(ix + iy), chirp);
    }
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    auto* io = reinterpret_cast<fftw_complex*>(buffer.data());
    plan = fftw_plan_dft_2d(n, n, io, io, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  // k_eff / (2 pi i z) d^2, the quadratic output phase and the centring signs.
  // (-1)^{n/2} per axis from the centred indices squares to 1 in 2-D.
  const cd prefactor = k_eff / (cd(0.0, two_pi * z)) * d * d;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double x = out.coordinate(ix);
      const double y = out.coordinate(iy);
      const double chirp = k_eff * (x * x + y * y) / (2.0 * z);
      out.at(ix, iy) = prefactor * std::polar(checkerboard(ix + iy), chirp) * buffer[static_cast<std::size_t>(iy) * n + ix];
    }
  }
  return out;
}

FftGridSuggestion suggest_fft_grids(const Plane& plane, const PumpParams& pump, const MediumParams& medium, int n) {
  if (!(plane.z() > 0.0)) throw DomainError("suggest_fft_grids: z must be positive");
  const double k_eff = 0.5 * pump.wavenumber();
  const double d_max = std::sqrt(two_pi * plane.z() / (k_eff * n));
  const TwoPhotonAmplitude source(Plane(0.0, pump), pump, medium);
  FftGridSuggestion g;
  g.n = n;
  g.spacing_plus = 0.95 * d_max;
  g.spacing_minus = std::min(0.95 * d_max, 0.3 * source.difference_radius_estimate());
  return g;
}

ReducedSource sample_reduced_source(const FftGridSuggestion& grids, const PumpParams& pump, const MediumParams& medium,
                                    const SincApprox& approx, SincMode mode, const QuadratureSpec& spec, int threads) {
  const int n = grids.n;
  ReducedSource src{FftGrid(n, grids.spacing_plus), FftGrid(n, grids.spacing_minus)};
  const int l = pump.oam();
  const int m = std::abs(l);
  // f+ = -C (-1)^|l| e^{-2 i l theta} S(rho, 0), so that f+ f- is the unpropagated amplitude
  const double c = std::exp(2.0 * m * std::log(pump.waist()) - std::log(pi) - std::lgamma(m + 1.0) -
                            (3.0 * m + 2.0) * std::log(2.0));
  const double sign = m % 2 == 0 ? -1.0 : 1.0;

  // distinct integer radii^2 of the centred lattice
  std::map<long, std::size_t> index;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const long dx = ix - n / 2;
      const long dy = iy - n / 2;
      index.emplace(dx * dx + dy * dy, 0);
    }
  }
  std::vector<long> keys;
  for (auto& [key, slot] : index) {
    slot = keys.size();
    keys.push_back(key);
  }
  std::vector<cd> s_vals(keys.size());
  std::vector<cd> d_vals(keys.size());
  parallel_for(keys.size(), threads, [&](std::size_t i) {
    const double r = std::sqrt(static_cast<double>(keys[i]));
    s_vals[i] = sum_coordinate_integral(r * grids.spacing_plus, 0.0, pump, spec);
    d_vals[i] = difference_coordinate_integral(r * grids.spacing_minus, 0.0, pump, medium, approx, mode, spec);
  });
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const long dx = ix - n / 2;
      const long dy = iy - n / 2;
      const std::size_t slot = index.at(dx * dx + dy * dy);
      const double theta = Vec2{static_cast<double>(dx), static_cast<double>(dy)}.azimuth();
      src.plus.at(ix, iy) = sign * c * std::exp(cd(0.0, -2.0 * l * theta)) * s_vals[slot];
      src.minus.at(ix, iy) = d_vals[slot];
    }
  }
  return src;
}

FftCrossCheck fft_cross_check(const Plane& plane, const PumpParams& pump, const MediumParams& medium,
                              const SincApprox& approx, int n, const QuadratureSpec& spec, int threads) {
  const FftGridSuggestion grids = suggest_fft_grids(plane, pump, medium, n);
  const ReducedSource src = sample_reduced_source(grids, pump, medium, approx, SincMode::cos_gauss, spec, threads);
  const double k_eff = 0.5 * pump.wavenumber();
  FftCrossCheck out;
  out.plus = fresnel_fft(src.plus, plane.z(), k_eff);
  out.minus = fresnel_fft(src.minus, plane.z(), k_eff);
  out.energy_ratio = (out.plus.energy() * out.minus.energy()) / (src.plus.energy() * src.minus.energy());

  const TwoPhotonAmplitude closed(plane, pump, medium, approx);
  const std::size_t count = static_cast<std::size_t>(n) * n;
  std::vector<double> a(count), b(count), c(count), d(count);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
      a[i] = std::norm(out.plus.at(ix, iy));
      b[i] = std::norm(out.minus.at(ix, iy));
      c[i] = closed.sum_intensity(Vec2{out.plus.coordinate(ix), out.plus.coordinate(iy)}.norm());
      d[i] = std::norm(closed.difference_factor(Vec2{out.minus.coordinate(ix), out.minus.coordinate(iy)}.norm()));
    }
  }
  auto normalize = [](std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!(m > 0.0)) throw DegenerateError("fft_cross_check: all-zero factor");
    for (double& x : v) x /= m;
  };
  normalize(a);
  normalize(b);
  normalize(c);
  normalize(d);
  // ||AB - CD||^2 for the separable 4-D arrays without forming them, written as
  // (A - C) B + C (B - D) so nothing cancels
  auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<double> da(count), db(count);
  for (std::size_t i = 0; i < count; ++i) {
    da[i] = a[i] - c[i];
    db[i] = b[i] - d[i];
  }
  const double num = dot(da, da) * dot(b, b) + 2.0 * dot(da, c) * dot(b, db) + dot(c, c) * dot(db, db);
  out.closed_form_l2 = std::sqrt(std::max(num, 0.0) / (dot(c, c) * dot(d, d)));

  std::vector<double> radii;
  std::vector<double> fft_row;
  for (int ix = n / 2; ix < n; ++ix) {
    radii.push_back(out.minus.coordinate(ix));
    fft_row.push_back(std::norm(out.minus.at(ix, n / 2)));
  }
  const RadialProfile o1 =
      radial_oracle(ReducedFactor::difference, radii, plane, pump, medium, approx, SincMode::cos_gauss, spec, threads);
  std::vector<double> o1_row;
  for (const cd& v : o1.values) o1_row.push_back(std::norm(v));
  out.radial_oracle_l2 = normalized_l2_error(fft_row, o1_row);
  return out;
}

}  // namespace twinbeam
