#include "twinbeam/clipping_noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twinbeam/errors.hpp"
#include "twinbeam/parallel.hpp"
#include "twinbeam/quadrature.hpp"

namespace twinbeam {

namespace {

// Radius beyond which a radial intensity stays below 1e-13 of its peak,
// found by marching outward in steps of radius / 16.
double radial_extent(const std::function<double(double)>& intensity, double radius, double& peak) {
  const double step = radius / 16.0;
  peak = 0.0;
  double peak_r = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double r = i * step;
    const double v = intensity(r);
    if (v > peak) {
      peak = v;
      peak_r = r;
    }
    if (r > peak_r && r > radius && v < 1e-13 * peak) return r;
  }
  throw SamplingError("clipping lattice: radial intensity does not decay");
}

QuadratureSpec marginal_spec() {
  QuadratureSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-11;
  return s;
}

// 1-D marginal of a radially symmetric intensity: 2 int_0^sqrt(X^2 - x^2) I(sqrt(x^2 + y^2)) dy.
double line_integral(const std::function<double(double)>& intensity, double x, double extent) {
  if (std::abs(x) >= extent) return 0.0;
  const double y_max = std::sqrt(extent * extent - x * x);
  return 2.0 * integrate([&](double y) { return intensity(std::hypot(x, y)); }, 0.0, y_max, marginal_spec()).value;
}

double disc_integral(const std::function<double(double)>& intensity, double extent) {
  return two_pi * integrate([&](double r) { return r * intensity(r); }, 0.0, extent, marginal_spec()).value;
}

}  // namespace

std::string to_string(ClipGeometry g) { return g == ClipGeometry::same_side ? "same_side" : "opposite_side"; }
std::string to_string(RetentionProxy p) { return p == RetentionProxy::symmetric ? "symmetric" : "min"; }

double KnifeEdgeMask::transmission(double lo, double hi) const {
  const double open = side == BlockSide::below ? (hi - cut) / (hi - lo) : (cut - lo) / (hi - lo);
  return std::clamp(open, 0.0, 1.0);
}

void NoiseModelParams::validate() const {
  if (!(squeezing_db >= 0.0)) throw DomainError("noise model: squeezing must be >= 0 dB");
  if (!(v_uncorrelated >= 1.0)) throw DomainError("noise model: uncorrelated noise level must be >= 1 (shot noise)");
}

ClipLattice::ClipLattice(const TwoPhotonAmplitude& amplitude, const ClipLatticeOptions& options)
    : z_(amplitude.plane().z()), z_over_zr_(amplitude.plane().z_over_zr()), oam_(amplitude.pump().oam()) {
  if (!(options.spacing_fraction > 0.0) || options.max_points < 3)
    throw DomainError("clipping lattice: invalid options");
  const auto raw_plus = [&](double r) { return amplitude.sum_intensity(r); };
  const auto raw_minus = [&](double r) { return std::norm(amplitude.difference_factor(r)); };
  const double r_plus = amplitude.sum_radius_estimate();
  const double r_minus = amplitude.difference_radius_estimate();
  double peak_plus = 0.0;
  double peak_minus = 0.0;
  const double x_plus = radial_extent(raw_plus, r_plus, peak_plus);
  const double x_minus = radial_extent(raw_minus, r_minus, peak_minus);
  if (!(peak_plus > 0.0) || !(peak_minus > 0.0)) throw DegenerateError("clipping lattice: amplitude is zero");
  // work with peak-normalized intensities; the scale comes back in the totals
  const std::function<double(double)> plus = [&](double r) { return raw_plus(r) / peak_plus; };
  const std::function<double(double)> minus = [&](double r) { return raw_minus(r) / peak_minus; };

  spacing_ = options.spacing_fraction * std::min(r_plus, r_minus);
  const double half = 0.5 * (x_plus + x_minus);
  const long half_points = static_cast<long>(std::ceil(half / spacing_));
  if (2 * half_points + 1 > options.max_points) {
    std::ostringstream msg;
    msg << "clipping lattice: " << 2 * half_points + 1 << " points needed (limit " << options.max_points
        << "); the two factor widths are too far apart";
    throw SamplingError(msg.str());
  }
  n_ = static_cast<int>(2 * half_points + 1);

  a_.assign(2 * n_ - 1, 0.0);
  b_.assign(2 * n_ - 1, 0.0);
  parallel_for(static_cast<std::size_t>(n_), options.threads, [&](std::size_t k) {
    const double x = static_cast<double>(k) * spacing_;
    a_[n_ - 1 + k] = line_integral(plus, x, x_plus);
    b_[n_ - 1 + k] = line_integral(minus, x, x_minus);
  });
  for (int k = 1; k < n_; ++k) {
    a_[n_ - 1 - k] = a_[n_ - 1 + k];
    b_[n_ - 1 - k] = b_[n_ - 1 + k];
  }

  double sum = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) sum += weight(i, j);
  const double scale = peak_plus * peak_minus;
  lattice_total_ = sum * spacing_ * spacing_ * scale;
  // dx_pr dx_c = dx+ dx- / 2 on top of the 1/2 in W
  exact_total_ = 0.25 * disc_integral(plus, x_plus) * disc_integral(minus, x_minus) * scale;
  if (std::abs(lattice_total_ / exact_total_ - 1.0) > options.truncation_limit) {
    std::ostringstream msg;
    msg << "clipping lattice: lattice holds " << lattice_total_ / exact_total_ << " of the total energy (limit "
        << 1.0 - options.truncation_limit << ")";
    throw SamplingError(msg.str());
  }
  // W in absolute units from here on
  for (double& v : a_) v *= peak_plus;
  for (double& v : b_) v *= peak_minus;
}

Marginal marginal_intensity(const ClipLattice& lattice, Beam beam) {
  const int n = lattice.size();
  const double d = lattice.spacing();
  Marginal m;
  m.spacing = d;
  m.x.resize(n);
  m.density.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    m.x[i] = lattice.coordinate(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += beam == Beam::probe ? lattice.weight(i, j) : lattice.weight(j, i);
    m.density[i] = s * d;
  }
  for (double v : m.density) m.total += v * d;
  return m;
}

double cut_for_fraction(const Marginal& marginal, double fraction, BlockSide side) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw DomainError("cut_for_fraction: fraction must lie in [0, 1)");
  if (!(marginal.total > 0.0)) throw DegenerateError("cut_for_fraction: marginal carries no power");
  const double d = marginal.spacing;
  const double lo_edge = marginal.x.front() - 0.5 * d;
  const double hi_edge = marginal.x.back() + 0.5 * d;
  if (fraction == 0.0) return side == BlockSide::below ? lo_edge : hi_edge;
  auto blocked = [&](double c) {
    const KnifeEdgeMask mask{Beam::probe, side, c};
    double kept = 0.0;
    for (std::size_t i = 0; i < marginal.x.size(); ++i)
      kept += marginal.density[i] * mask.transmission(marginal.x[i] - 0.5 * d, marginal.x[i] + 0.5 * d) * d;
    return 1.0 - kept / marginal.total;
  };
  // blocked(c) rises with c for an edge blocking from below and falls otherwise
  double lo = lo_edge;
  double hi = hi_edge;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double b = blocked(mid);
    if (std::abs(b - fraction) <= 1e-9) break;
    const bool too_far = side == BlockSide::below ? b > fraction : b < fraction;
    (too_far ? hi : lo) = mid;
  }
  const double achieved = blocked(mid);
  if (std::abs(achieved - fraction) > 1e-6)
    throw ConvergenceError("cut_for_fraction: bisection did not reach the requested fraction", mid,
                           std::abs(achieved - fraction));
  return mid;
}

double partner_retention(const ClipLattice& lattice, const KnifeEdgeMask& probe_mask,
                         const KnifeEdgeMask& conjugate_mask, RetentionProxy proxy) {
  if (probe_mask.beam != Beam::probe || conjugate_mask.beam != Beam::conjugate)
    throw DomainError("partner_retention: masks must be given as (probe, conjugate)");
  const int n = lattice.size();
  const double d = lattice.spacing();
  std::vector<double> tp(n), tc(n);
  for (int i = 0; i < n; ++i) {
    const double x = lattice.coordinate(i);
    tp[i] = probe_mask.transmission(x - 0.5 * d, x + 0.5 * d);
    tc[i] = conjugate_mask.transmission(x - 0.5 * d, x + 0.5 * d);
  }
  double p12 = 0.0, p1 = 0.0, p2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = lattice.weight(i, j);
      p12 += tp[i] * tc[j] * w;
      p1 += tp[i] * w;
      p2 += tc[j] * w;
    }
  }
  if (proxy == RetentionProxy::symmetric) {
    if (!(p1 + p2 > 0.0)) throw DegenerateError("partner_retention: both masks block everything");
    return std::clamp(2.0 * p12 / (p1 + p2), 0.0, 1.0);
  }
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw DegenerateError("partner_retention: a mask blocks everything");
  return std::clamp(std::min(p12 / p1, p12 / p2), 0.0, 1.0);
}

double noise_level(double eta, const NoiseModelParams& noise) {
  noise.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("noise_level: retention must lie in [0, 1]");
  return eta * std::pow(10.0, -noise.squeezing_db / 10.0) + (1.0 - eta) * noise.v_uncorrelated;
}

std::pair<KnifeEdgeMask, KnifeEdgeMask> scenario_masks(const ClipLattice& lattice, double fraction,
                                                       ClipGeometry geometry) {
  const BlockSide conj_side = geometry == ClipGeometry::same_side ? BlockSide::below : BlockSide::above;
  const KnifeEdgeMask probe{Beam::probe, BlockSide::below,
                            cut_for_fraction(marginal_intensity(lattice, Beam::probe), fraction, BlockSide::below)};
  const KnifeEdgeMask conj{Beam::conjugate, conj_side,
                           cut_for_fraction(marginal_intensity(lattice, Beam::conjugate), fraction, conj_side)};
  return {probe, conj};
}

ClipRow evaluate_scenario(const ClipLattice& lattice, const ClipScenario& scenario, RetentionProxy proxy) {
  scenario.noise.validate();
  const auto [probe, conj] = scenario_masks(lattice, scenario.fraction, scenario.geometry);
  ClipRow row;
  row.fraction = scenario.fraction;
  row.geometry = scenario.geometry;
  row.z = lattice.z();
  row.z_over_zr = lattice.z_over_zr();
  row.oam = lattice.oam();
  row.cut_probe = probe.cut;
  row.cut_conjugate = conj.cut;
  row.eta = partner_retention(lattice, probe, conj, proxy);
  row.noise = noise_level(row.eta, scenario.noise);
  return row;
}

std::vector<ClipRow> noise_vs_clipping(const ClipSweep& sweep, const PumpParams& pump, const MediumParams& medium,
                                       const SincApprox& approx) {
  sweep.noise.validate();
  std::vector<ClipRow> rows;
  for (double zr : sweep.planes_z_over_zr) {
    const TwoPhotonAmplitude amplitude(Plane::in_rayleigh_units(zr, pump), pump, medium, approx);
    const ClipLattice lattice(amplitude, sweep.lattice);
    for (ClipGeometry g : sweep.geometries) {
      for (double f : sweep.fractions) {
        rows.push_back(evaluate_scenario(lattice, ClipScenario{f, g, zr, sweep.noise}, sweep.proxy));
      }
    }
  }
  return rows;
}

}  // namespace twinbeam
