#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "fixtures.hpp"
#include "twinbeam/amplitude.hpp"
#include "twinbeam/oracle.hpp"

using namespace twinbeam;
using cd = std::complex<double>;

namespace {

std::vector<cd> closed_profile(const TwoPhotonAmplitude& a, ReducedFactor f, const std::vector<double>& radii) {
  std::vector<cd> out;
  for (double r : radii) out.push_back(f == ReducedFactor::sum ? a.sum_factor({r, 0.0}) : a.difference_factor(r));
  return out;
}

std::vector<double> radii_for(const TwoPhotonAmplitude& a, ReducedFactor f, int n) {
  const double extent = f == ReducedFactor::sum ? 2.5 * a.sum_radius_estimate() : 2.0 * a.difference_radius_estimate();
  return fixtures::linspace(0.0, extent, n);
}

}  // namespace

TEST_CASE("Jacobi-Anger truncation") {
  CHECK(jacobi_anger_residual(5.0, 1.1, 40) < 1e-10);
  CHECK(jacobi_anger_residual(5.0, 1.1, 3) > 1e-3);
}

TEST_CASE("Weber integral, real parameters") {
  const QuadratureSpec spec;
  CHECK(verify_weber_integral(0, 1.0, 1.0, 1.0, spec).residual < 1e-8);
  CHECK(verify_weber_integral(3, 2.5, 1.5, 0.7, spec).residual < 1e-8);
  const auto zero = verify_weber_integral(2, 0.0, 1.3, 1.0, spec);
  CHECK(std::abs(zero.closed_form) == 0.0);
  CHECK(std::abs(zero.quadrature) < 1e-15);
  CHECK_THROWS_AS(verify_weber_integral(0, 1.0, 1.0, cd(-1.0, 0.0), spec), DomainError);
}

TEST_CASE("Weber integral, complex p^2 along a homotopy") {
  const QuadratureSpec spec;
  const auto h = weber_homotopy(2, 2.0, 0.5, cd(0.5, 0.3), 16, spec);
  CHECK(h.s.front() == 0.0);
  CHECK(h.s.back() == 1.0);
  CHECK(h.max_residual < 1e-6);
  CHECK(h.max_step_change < 0.2);
}

TEST_CASE("Gaussian moment integral") {
  const QuadratureSpec spec;
  CHECK(verify_gaussian_moment_integral(0, 1.0, 1.0, spec).residual < 1e-8);
  CHECK(verify_gaussian_moment_integral(2, cd(0.0, 0.7), 1.0, spec).residual < 1e-7);
  const auto plain = verify_gaussian_moment_integral(0, 0.0, cd(0.8, 0.2), spec);
  CHECK(std::abs(plain.closed_form - 1.0 / (2.0 * cd(0.8, 0.2))) < 1e-15);
  CHECK(plain.residual < 1e-8);
  const auto h = gaussian_moment_homotopy(2, cd(0.3, 0.7), cd(1.0, 0.6), 16, spec);
  CHECK(h.max_residual < 1e-6);
  CHECK(h.max_step_change < 0.2);
}

TEST_CASE("sum-coordinate integral at the origin") {
  const QuadratureSpec spec;
  const double w = fixtures::waist;
  const cd v = sum_coordinate_integral(0.0, 0.0, fixtures::pump(0), spec);
  CHECK(std::abs(v - 4.0 / (w * w)) / (4.0 / (w * w)) < 1e-9);
  CHECK(sum_coordinate_integral(0.0, 0.0, fixtures::pump(1), spec) == cd(0.0));
}

TEST_CASE("position amplitude at z = 0 against the closed form") {
  // the closed form carries a global -4 relative to the unpropagated amplitude
  const QuadratureSpec spec;
  for (int l : {0, 1, 2}) {
    const auto a = fixtures::amplitude(0.0, l);
    const Vec2 rp = from_polar(0.3e-3, 0.7);
    const cd quad = position_amplitude_quadrature(rp, 0.05e-3, fixtures::pump(l), fixtures::medium(), {},
                                                  SincMode::cos_gauss, spec);
    const cd closed = a.sum_factor(rp) * a.difference_factor(0.05e-3);
    CHECK(std::abs(quad / closed - (-0.25)) < 1e-6);
  }
}

TEST_CASE("propagated amplitude from the momentum integrals matches the closed form up to (-1)^l") {
  const QuadratureSpec spec;
  for (int l : {0, 1, -2}) {
    for (double zr : {0.025, 0.5}) {
      const auto a = fixtures::amplitude(zr, l);
      const Vec2 rp = from_polar(0.8e-3, 2.1);
      const double rm = 0.5 * a.difference_radius_estimate();
      const cd quad = propagated_amplitude_quadrature(rp, rm, fixtures::plane(zr, l), fixtures::pump(l),
                                                      fixtures::medium(), {}, SincMode::cos_gauss, spec);
      const cd closed = a.sum_factor(rp) * a.difference_factor(rm);
      const double sign = std::abs(l) % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(quad - sign * closed) / std::abs(closed) < 1e-8);
    }
  }
}

TEST_CASE("radial oracle: sum factor, l = 1, z = 0.083 zR") {
  const QuadratureSpec spec;
  const auto a = fixtures::amplitude(0.083, 1);
  const auto radii = radii_for(a, ReducedFactor::sum, 32);
  const auto prof = radial_oracle(ReducedFactor::sum, radii, fixtures::plane(0.083, 1), fixtures::pump(1),
                                  fixtures::medium(), {}, SincMode::cos_gauss, spec);
  CHECK(prof.order == 2);
  CHECK(normalized_l2_error(prof.values, closed_profile(a, ReducedFactor::sum, radii)) < 1e-8);
}

TEST_CASE("radial oracle settles the difference-factor bracket weights") {
  const QuadratureSpec spec;
  const auto a = fixtures::amplitude(0.025);
  const auto radii = radii_for(a, ReducedFactor::difference, 32);
  const auto prof = radial_oracle(ReducedFactor::difference, radii, fixtures::plane(0.025), fixtures::pump(),
                                  fixtures::medium(), {}, SincMode::cos_gauss, spec);
  CHECK(normalized_l2_error(prof.values, closed_profile(a, ReducedFactor::difference, radii)) < 1e-6);
  std::vector<cd> unequal;
  for (double r : radii) unequal.push_back(difference_factor_unequal_weights(a.coefficients(), r));
  CHECK(normalized_l2_error(prof.values, unequal) > 1e-3);
}

TEST_CASE("propagated |F|^2 at z = 0 against the quadrature on a 64-point radial grid") {
  const QuadratureSpec spec;
  const auto a = fixtures::amplitude(0.0);
  const auto radii = fixtures::linspace(0.0, 2.0 * a.difference_radius_estimate(), 64);
  std::vector<double> closed;
  std::vector<double> quad;
  const Vec2 rp{0.2e-3, 0.0};
  for (double r : radii) {
    closed.push_back(std::norm(a.sum_factor(rp) * a.difference_factor(r)));
    quad.push_back(std::norm(propagated_amplitude_quadrature(rp, r, fixtures::plane(0.0), fixtures::pump(),
                                                             fixtures::medium(), {}, SincMode::cos_gauss, spec)));
  }
  CHECK(normalized_l2_error(quad, closed) < 1e-6);
}

TEST_CASE("exact sinc against the cosine-Gaussian stand-in at z = 0") {
  const QuadratureSpec spec;
  const auto a = fixtures::amplitude(0.0);
  const auto radii = radii_for(a, ReducedFactor::difference, 32);
  const auto exact = radial_oracle(ReducedFactor::difference, radii, fixtures::plane(0.0), fixtures::pump(),
                                   fixtures::medium(), {}, SincMode::exact, spec);
  const auto approx = radial_oracle(ReducedFactor::difference, radii, fixtures::plane(0.0), fixtures::pump(),
                                    fixtures::medium(), {}, SincMode::cos_gauss, spec);
  // regression constant for the approximation error of the stand-in
  CHECK(normalized_l2_error(approx.values, exact.values) == doctest::Approx(0.101589).epsilon(1e-4));
}

TEST_CASE("exact sinc against arbitrary-precision oscillatory quadrature") {
  const auto pump = fixtures::pump();
  const auto med = fixtures::medium();
  const double c = med.cell_length() / (8.0 * pump.wavenumber());
  const QuadratureSpec spec;
  struct Ref {
    double rho;
    double scaled;  // c times the integral
  };
  for (const Ref& r : {Ref{25e-6, 0.682731473565102}, Ref{60e-6, 0.237021127399091}}) {
    const cd v = difference_coordinate_integral(r.rho, 0.0, pump, med, {}, SincMode::exact, spec);
    CHECK(std::abs(c * v - r.scaled) < 1e-9);
  }
}

TEST_CASE("exact sinc at the origin converges under refinement") {
  const auto pump = fixtures::pump();
  const auto med = fixtures::medium();
  QuadratureSpec spec;
  const cd base = difference_coordinate_integral(0.0, 0.0, pump, med, {}, SincMode::exact, spec);
  QuadratureSpec wider = spec;
  wider.q_max = 2.0 * 8.0 / std::sqrt(med.cell_length() / (8.0 * pump.wavenumber()));
  const cd doubled = difference_coordinate_integral(0.0, 0.0, pump, med, {}, SincMode::exact, wider);
  CHECK(std::abs(doubled - base) / std::abs(base) < 1e-8);
  // int_0^inf q sinc(c q^2) dq = pi / (4c)
  const double c = med.cell_length() / (8.0 * pump.wavenumber());
  CHECK(std::abs(base - pi / (4.0 * c)) / (pi / (4.0 * c)) < 1e-8);
}

TEST_CASE("quadrature is stable under doubling the truncation and tightening tolerances") {
  const auto pump = fixtures::pump(1);
  const auto med = fixtures::medium();
  QuadratureSpec spec;
  const double rho = 0.3e-3;
  const cd s = sum_coordinate_integral(rho, 0.3, pump, spec);
  QuadratureSpec wide = spec;
  wide.q_max = 2.0 * std::sqrt(52.0 / (fixtures::waist * fixtures::waist / 8.0));
  wide.rel_tol = 1e-11;
  CHECK(std::abs(sum_coordinate_integral(rho, 0.3, pump, wide) - s) / std::abs(s) < 1e-9);
  const cd d = difference_coordinate_integral(20e-6, 0.3, pump, med, {}, SincMode::cos_gauss, spec);
  QuadratureSpec wide_d = spec;
  const double c = med.cell_length() / (8.0 * pump.wavenumber());
  wide_d.q_max = 2.0 * std::sqrt(48.0 / (0.49 * c));
  wide_d.rel_tol = 1e-11;
  CHECK(std::abs(difference_coordinate_integral(20e-6, 0.3, pump, med, {}, SincMode::cos_gauss, wide_d) - d) /
            std::abs(d) <
        1e-9);
}

TEST_CASE("normalized L2 error ignores global constants") {
  const std::vector<cd> a{{1.0, 0.0}, {0.5, 0.5}, {0.0, 0.1}};
  std::vector<cd> b;
  for (const cd& v : a) b.push_back(v * cd(-3.0, 2.0));
  CHECK(normalized_l2_error(b, a) < 1e-15);
  CHECK_THROWS_AS(normalized_l2_error(std::vector<cd>(3, 0.0), a), DegenerateError);
}

TEST_CASE("radial profile validation") {
  RadialProfile p;
  p.radii = {0.0, 1.0, 1.0};
  p.values.assign(3, 0.0);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.radii = {0.1, 1.0, 2.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("tabulated difference factor reproduces the closed form") {
  const Plane plane = fixtures::plane(0.083);
  TwoPhotonAmplitude amp = fixtures::amplitude(0.083);
  const double r_max = 3.0 * amp.difference_radius_estimate();
  const auto table = difference_table(plane, fixtures::pump(), fixtures::medium(), SincApprox{}, SincMode::cos_gauss,
                                      r_max, 601, QuadratureSpec{});
  const TwoPhotonAmplitude closed = amp;
  amp.use_difference_table(table);
  CHECK(amp.has_difference_table());
  const double scale = std::abs(closed.difference_factor(0.0));
  for (double r : fixtures::linspace(0.0, r_max, 57)) {
    CHECK(std::abs(amp.difference_factor(r) - closed.difference_factor(r)) < 2e-4 * scale);
  }
  CHECK(amp.difference_factor(1.01 * r_max) == std::complex<double>(0.0));
}
