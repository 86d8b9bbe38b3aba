#include "doctest.h"

#include <cmath>
#include <complex>

#include "fixtures.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/fresnel_fft.hpp"

using namespace twinbeam;
using cd = std::complex<double>;

namespace {

FftGrid gaussian(int n, double d, double s) {
  FftGrid g(n, d);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double r2 = g.coordinate(ix) * g.coordinate(ix) + g.coordinate(iy) * g.coordinate(iy);
      g.at(ix, iy) = std::exp(-r2 / (2.0 * s * s));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("free Gaussian propagates to the analytic beam") {
  const double k = 0.5 * 2.0 * pi / 795e-9;
  const double s = 0.3e-3;
  const double z = 0.4;
  const int n = 128;
  const double d = 0.95 * std::sqrt(two_pi * z / (k * n));
  const FftGrid out = fresnel_fft(gaussian(n, d, s), z, k);
  CHECK(out.spacing == doctest::Approx(fresnel_output_spacing(d, n, z, k)));
  const double a = 1.0 / (2.0 * s * s);
  const cd q = 1.0 + cd(0.0, 2.0 * a * z / k);
  double worst = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double r2 = out.coordinate(ix) * out.coordinate(ix) + out.coordinate(iy) * out.coordinate(iy);
      const cd expect = std::exp(-a * r2 / q) / q;
      worst = std::max(worst, std::abs(out.at(ix, iy) - expect));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("discrete transform preserves energy") {
  const double k = 4e6;
  const int n = 64;
  const double z = 0.2;
  const double d = 0.9 * std::sqrt(two_pi * z / (k * n));
  const FftGrid src = gaussian(n, d, 6.0 * d);
  const FftGrid out = fresnel_fft(src, z, k);
  CHECK(out.energy() == doctest::Approx(src.energy()).epsilon(1e-12));
}

TEST_CASE("undersampled chirp is refused") {
  const double k = 4e6;
  const int n = 64;
  const double z = 0.2;
  const double d = 1.2 * std::sqrt(two_pi * z / (k * n));
  CHECK_THROWS_AS(fresnel_fft(gaussian(n, d, 6.0 * d), z, k), SamplingError);
}

TEST_CASE("field at the boundary is refused") {
  const double k = 4e6;
  const int n = 64;
  const double z = 0.2;
  const double d = 0.9 * std::sqrt(two_pi * z / (k * n));
  CHECK_THROWS_AS(fresnel_fft(gaussian(n, d, 20.0 * d), z, k), SamplingError);
  CHECK_THROWS_AS(fresnel_fft(FftGrid(n, d), z, k), DegenerateError);
  CHECK_THROWS_AS(FftGrid(63, d), DomainError);
}

TEST_CASE("FFT propagation of the source amplitude matches the closed form at z = 0.5 zR") {
  const QuadratureSpec spec;
  for (int l : {0, 1}) {
    const auto r = fft_cross_check(fixtures::plane(0.5, l), fixtures::pump(l), fixtures::medium(), {}, 128, spec);
    INFO("l = " << l << ", closed-form L2 = " << r.closed_form_l2 << ", radial L2 = " << r.radial_oracle_l2);
    CHECK(r.closed_form_l2 < 1e-2);
    CHECK(r.radial_oracle_l2 < 2e-2);
    CHECK(std::abs(r.energy_ratio - 1.0) < 5e-3);
  }
}
