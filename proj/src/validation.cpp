#include "twinbeam/validation.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

#include "twinbeam/amplitude.hpp"
#include "twinbeam/fresnel_fft.hpp"
#include "twinbeam/oracle.hpp"

namespace twinbeam {

using cd = std::complex<double>;

namespace {

std::string describe(double z_over_zr, int oam) {
  std::ostringstream s;
  s << "z=" << z_over_zr << "zR l=" << oam;
  return s.str();
}

std::vector<double> linspace(double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = hi * i / (n - 1);
  return v;
}

}  // namespace

CheckResult make_check(std::string name, std::string parameters, double value, double tolerance, bool upper_bound) {
  CheckResult c{std::move(name), std::move(parameters), value, tolerance, upper_bound, false};
  c.pass = upper_bound ? value < tolerance : value > tolerance;
  return c;
}

std::vector<CheckResult> integral_identity_checks(const PumpParams& pump, const QuadratureSpec& spec) {
  std::vector<CheckResult> out;
  out.push_back(make_check("weber_real", "nu=0 a=1 b=1 p2=1", verify_weber_integral(0, 1.0, 1.0, 1.0, spec).residual,
                           1e-8));
  out.push_back(make_check("weber_real", "nu=3 a=2.5 b=1.5 p2=0.7",
                           verify_weber_integral(3, 2.5, 1.5, 0.7, spec).residual, 1e-8));
  out.push_back(make_check("weber_homotopy", "nu=2 a=2 b=0.5 p2=0.5+0.3i",
                           weber_homotopy(2, 2.0, 0.5, cd(0.5, 0.3), 16, spec).max_residual, 1e-6));
  out.push_back(make_check("gaussian_moment_real", "nu=0 b=1 p2=1",
                           verify_gaussian_moment_integral(0, 1.0, 1.0, spec).residual, 1e-8));
  out.push_back(make_check("gaussian_moment_real", "nu=2 b=1.7 p2=0.6",
                           verify_gaussian_moment_integral(2, 1.7, 0.6, spec).residual, 1e-8));
  out.push_back(make_check("gaussian_moment_homotopy", "nu=2 b=0.3+0.7i p2=1+0.6i",
                           gaussian_moment_homotopy(2, cd(0.3, 0.7), cd(1.0, 0.6), 16, spec).max_residual, 1e-6));

  // the model's own complex parameters at 0.5 zR, in units of the waist
  const double w = pump.waist();
  const double k = pump.wavenumber();
  const double z = 0.5 * pump.rayleigh_range();
  const cd p2 = cd(w * w / 8.0, z / (4.0 * k)) / (w * w);
  const int nu = std::max(2, 2 * std::abs(pump.oam()));
  out.push_back(make_check("gaussian_moment_homotopy", "physical p2 at 0.5zR, b=i/2",
                           gaussian_moment_homotopy(nu, cd(0.0, 0.5), p2, 16, spec).max_residual, 1e-6));
  out.push_back(make_check("weber_homotopy", "physical p2 at 0.5zR, a=0.5 b=1.5",
                           weber_homotopy(nu, 0.5, 1.5, p2, 16, spec).max_residual, 1e-6));

  double ja = 0.0;
  for (double rho : {0.5, 5.0, 12.0})
    for (double phi : {0.0, 1.1, 2.9}) ja = std::max(ja, jacobi_anger_residual(rho, phi, 48));
  out.push_back(make_check("jacobi_anger", "rho<=12 n_max=48", ja, 1e-10));
  return out;
}

CheckResult arbitration_check(double z_over_zr, int oam, const PumpParams& base, const MediumParams& medium,
                              const SincApprox& approx, const QuadratureSpec& spec, int threads, int radii) {
  const PumpParams pump(base.waist(), base.wavelength(), oam);
  const Plane plane = Plane::in_rayleigh_units(z_over_zr, pump);
  const TwoPhotonAmplitude closed(plane, pump, medium, approx);
  const auto r_plus = linspace(2.5 * closed.sum_radius_estimate() * std::sqrt(1.0 + std::abs(oam)), radii);
  const auto r_minus = linspace(2.0 * closed.difference_radius_estimate(), radii);
  const RadialProfile s =
      radial_oracle(ReducedFactor::sum, r_plus, plane, pump, medium, approx, SincMode::cos_gauss, spec, threads);
  const RadialProfile d =
      radial_oracle(ReducedFactor::difference, r_minus, plane, pump, medium, approx, SincMode::cos_gauss, spec, threads);
  std::vector<cd> quad, form;
  for (int i = 0; i < radii; ++i) {
    const cd gs = closed.sum_factor({r_plus[i], 0.0});
    for (int j = 0; j < radii; ++j) {
      quad.push_back(s.values[i] * d.values[j]);
      form.push_back(gs * closed.difference_factor(r_minus[j]));
    }
  }
  return make_check("closed_form_vs_quadrature", describe(z_over_zr, oam), normalized_l2_error(quad, form), 1e-6);
}

CheckResult bracket_weight_check(double z_over_zr, const PumpParams& pump, const MediumParams& medium,
                                 const SincApprox& approx, const QuadratureSpec& spec, int threads) {
  const Plane plane = Plane::in_rayleigh_units(z_over_zr, pump);
  const TwoPhotonAmplitude closed(plane, pump, medium, approx);
  const auto r = linspace(2.0 * closed.difference_radius_estimate(), 32);
  const RadialProfile d =
      radial_oracle(ReducedFactor::difference, r, plane, pump, medium, approx, SincMode::cos_gauss, spec, threads);
  std::vector<cd> alt;
  for (double x : r) alt.push_back(difference_factor_unequal_weights(closed.coefficients(), x));
  return make_check("alternative_bracket_weights_rejected", describe(z_over_zr, pump.oam()),
                    normalized_l2_error(d.values, alt), 1e-3, false);
}

std::vector<CheckResult> fft_checks(double z_over_zr, int oam, int n, const PumpParams& base,
                                    const MediumParams& medium, const SincApprox& approx, const QuadratureSpec& spec,
                                    int threads) {
  const PumpParams pump(base.waist(), base.wavelength(), oam);
  const FftCrossCheck x =
      fft_cross_check(Plane::in_rayleigh_units(z_over_zr, pump), pump, medium, approx, n, spec, threads);
  std::ostringstream p;
  p << describe(z_over_zr, oam) << " n=" << n;
  return {make_check("fft_vs_closed_form", p.str(), x.closed_form_l2, 2e-2),
          make_check("fft_vs_radial_oracle", p.str(), x.radial_oracle_l2, 2e-2),
          make_check("fft_energy_conservation", p.str(), std::abs(x.energy_ratio - 1.0), 5e-3)};
}

std::vector<CheckResult> run_validation_suite(const PumpParams& pump, const MediumParams& medium,
                                              const SincApprox& approx, const ValidationOptions& options) {
  std::vector<CheckResult> out = integral_identity_checks(pump, options.spec);
  for (double zr : options.planes_z_over_zr)
    for (int l : options.oams)
      out.push_back(arbitration_check(zr, l, pump, medium, approx, options.spec, options.threads));
  out.push_back(bracket_weight_check(options.planes_z_over_zr.empty() ? 0.025 : options.planes_z_over_zr.front(),
                                     pump, medium, approx, options.spec, options.threads));
  for (int l : options.oams) {
    auto f = fft_checks(options.fft_z_over_zr, l, options.fft_n, pump, medium, approx, options.spec, options.threads);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace twinbeam
