#include "doctest.h"

#include <cmath>
#include <complex>

#include "fixtures.hpp"
#include "twinbeam/clipping_noise.hpp"
#include "twinbeam/errors.hpp"

using namespace twinbeam;
using cd = std::complex<double>;

namespace {

ClipLattice lattice(double zr, int l) { return ClipLattice(fixtures::amplitude(zr, l)); }

double eta(const ClipLattice& lat, double f, ClipGeometry g, RetentionProxy proxy = RetentionProxy::symmetric) {
  const auto [p, c] = scenario_masks(lat, f, g);
  return partner_retention(lat, p, c, proxy);
}

// x_pr marginal of the l = 0 amplitude written out in Gaussians: A(x) ~ exp(-kappa x^2)
// and |G-|^2 a sum of four complex Gaussians, so the x_c convolution is closed form.
double gaussian_pump_marginal(const TwoPhotonAmplitude& amp, double x) {
  const AmplitudeCoefficients& c = amp.coefficients();
  const double kappa = c.alpha.real() / 8.0;
  const cd d[2] = {cd(c.beta, c.gamma_plus), cd(c.beta, c.gamma_minus)};
  cd total = 0.0;
  for (const cd& ds : d) {
    for (const cd& dt : d) {
      const cd u = 1.0 / (16.0 * ds) + 1.0 / (16.0 * std::conj(dt));
      total += std::sqrt(pi / u) / (4.0 * ds * std::conj(dt)) * std::sqrt(pi / (kappa + u)) *
               std::exp(-4.0 * kappa * u / (kappa + u) * x * x);
    }
  }
  return total.real();
}

}  // namespace

TEST_CASE("lattice holds the whole energy and the total does not change with z") {
  for (int l : {0, 1}) {
    const double reference = lattice(0.0008, l).exact_total();
    for (double zr : fixtures::z_presets) {
      const ClipLattice lat = lattice(zr, l);
      CHECK(lat.lattice_total() == doctest::Approx(lat.exact_total()).epsilon(1e-6));
      CHECK(lat.lattice_total() == doctest::Approx(reference).epsilon(0.01));
    }
  }
}

TEST_CASE("lattice refuses when it cannot cover both factors") {
  ClipLatticeOptions opts;
  opts.max_points = 11;
  CHECK_THROWS_AS(ClipLattice(fixtures::amplitude(0.0008), opts), SamplingError);
}

TEST_CASE("marginals") {
  SUBCASE("the l = 0 marginal is even") {
    const Marginal m = marginal_intensity(lattice(0.083, 0), Beam::probe);
    const std::size_t n = m.density.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(m.density[i] == doctest::Approx(m.density[n - 1 - i]).epsilon(1e-12));
  }
  SUBCASE("an l = 1 pump gives identical probe and conjugate marginals in the near field") {
    const ClipLattice lat = lattice(0.0008, 1);
    const Marginal p = marginal_intensity(lat, Beam::probe);
    const Marginal c = marginal_intensity(lat, Beam::conjugate);
    double worst = 0.0, top = 0.0;
    for (std::size_t i = 0; i < p.density.size(); ++i) {
      worst = std::max(worst, std::abs(p.density[i] - c.density[i]));
      top = std::max(top, p.density[i]);
    }
    CHECK(worst <= 1e-12 * top);
  }
  SUBCASE("lattice marginal agrees with the Gaussian closed form") {
    const TwoPhotonAmplitude amp = fixtures::amplitude(0.0008);
    const Marginal m = marginal_intensity(ClipLattice(amp), Beam::probe);
    const double scale = m.density[m.density.size() / 2] / gaussian_pump_marginal(amp, 0.0);
    for (std::size_t i = 0; i < m.density.size(); i += 37)
      CHECK(m.density[i] == doctest::Approx(scale * gaussian_pump_marginal(amp, m.x[i])).epsilon(1e-6).scale(1e-6 * m.density[m.density.size() / 2]));
  }
}

TEST_CASE("cut positions") {
  const TwoPhotonAmplitude amp = fixtures::amplitude(0.0008);
  const Marginal m = marginal_intensity(ClipLattice(amp), Beam::probe);
  const double edge = m.x.back() + 0.5 * m.spacing;
  CHECK(cut_for_fraction(m, 0.0, BlockSide::below) == -edge);
  CHECK(cut_for_fraction(m, 0.0, BlockSide::above) == edge);
  CHECK(std::abs(cut_for_fraction(m, 0.5, BlockSide::below)) < 1e-3 * m.spacing);
  CHECK(std::abs(cut_for_fraction(m, 0.5, BlockSide::above)) < 1e-3 * m.spacing);
  CHECK_THROWS_AS(cut_for_fraction(m, 1.0, BlockSide::below), DomainError);
  CHECK_THROWS_AS(cut_for_fraction(m, -0.1, BlockSide::below), DomainError);

  SUBCASE("f = 0.8 matches a brute-force CDF inversion") {
    const int n = 400001;
    const double h = 3e-3;
    const double dx = 2.0 * h / (n - 1);
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += gaussian_pump_marginal(amp, -h + i * dx);
      cdf[i] = acc;
    }
    int i = 0;
    while (cdf[i] < 0.8 * acc) ++i;
    const double brute = -h + i * dx;
    CHECK(cut_for_fraction(m, 0.8, BlockSide::below) == doctest::Approx(brute).epsilon(1e-3));
    CHECK(cut_for_fraction(m, 0.8, BlockSide::above) == doctest::Approx(-brute).epsilon(1e-3));
  }
}

TEST_CASE("partner retention basics") {
  const ClipLattice lat = lattice(0.0008, 0);
  const double edge = lat.coordinate(lat.size() - 1) + lat.spacing();
  const KnifeEdgeMask open_pr{Beam::probe, BlockSide::below, -edge};
  const KnifeEdgeMask open_c{Beam::conjugate, BlockSide::below, -edge};
  CHECK(partner_retention(lat, open_pr, open_c) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eta(lat, 0.0, ClipGeometry::opposite_side) == doctest::Approx(1.0).epsilon(1e-12));

  const KnifeEdgeMask shut_pr{Beam::probe, BlockSide::below, edge};
  const KnifeEdgeMask shut_c{Beam::conjugate, BlockSide::above, -edge};
  CHECK_THROWS_AS(partner_retention(lat, shut_pr, shut_c), DegenerateError);
  CHECK_THROWS_AS(partner_retention(lat, shut_pr, open_c, RetentionProxy::min), DegenerateError);
  CHECK_THROWS_AS(partner_retention(lat, open_c, open_pr), DomainError);

  SUBCASE("swapping the masks between the beams leaves eta unchanged") {
    const KnifeEdgeMask a{Beam::probe, BlockSide::below, 0.1e-3};
    const KnifeEdgeMask b{Beam::conjugate, BlockSide::above, 0.3e-3};
    const KnifeEdgeMask a_swapped{Beam::probe, BlockSide::above, 0.3e-3};
    const KnifeEdgeMask b_swapped{Beam::conjugate, BlockSide::below, 0.1e-3};
    CHECK(partner_retention(lat, a, b) == doctest::Approx(partner_retention(lat, a_swapped, b_swapped)).epsilon(1e-12));
  }
  SUBCASE("eta stays in [0, 1] and the min proxy never exceeds the symmetric one") {
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (ClipGeometry g : {ClipGeometry::same_side, ClipGeometry::opposite_side}) {
        const double s = eta(lat, f, g);
        const double m = eta(lat, f, g, RetentionProxy::min);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(m <= s + 1e-15);
      }
    }
  }
}

TEST_CASE("Gaussian pump near field: edges on the same side keep partners together") {
  const ClipLattice lat = lattice(0.0008, 0);
  CHECK(eta(lat, 0.5, ClipGeometry::same_side) > 0.9);
  CHECK(eta(lat, 0.8, ClipGeometry::same_side) > 0.8);
  CHECK(eta(lat, 0.5, ClipGeometry::opposite_side) < 0.2);
}

TEST_CASE("Gaussian pump far field: the pattern reverses") {
  const ClipLattice lat = lattice(0.83, 0);
  CHECK(eta(lat, 0.5, ClipGeometry::same_side) < 0.2);
  CHECK(eta(lat, 0.8, ClipGeometry::opposite_side) > 0.8);

  ClipSweep sweep;
  sweep.fractions = {0.0, 0.2, 0.4, 0.6, 0.8};
  sweep.planes_z_over_zr = {0.83};
  const auto rows = noise_vs_clipping(sweep, fixtures::pump(0), fixtures::medium(), SincApprox{});
  REQUIRE(rows.size() == 10);
  double last_same = 0.0;
  for (const ClipRow& r : rows) {
    if (r.geometry == ClipGeometry::same_side) {
      CHECK(r.noise >= last_same);
      last_same = r.noise;
    } else {
      CHECK(r.noise < 1.0);
    }
  }
  CHECK(last_same > 0.95);
}

TEST_CASE("near-field retention barely depends on the pump mode") {
  CHECK(std::abs(eta(lattice(0.0008, 1), 0.5, ClipGeometry::same_side) -
                 eta(lattice(0.0008, 0), 0.5, ClipGeometry::same_side)) < 0.15);
}

TEST_CASE("LG far field retains less than the Gaussian opposite-side configuration") {
  const ClipLattice lg = lattice(0.83, 1);
  const ClipLattice gauss = lattice(0.83, 0);
  for (double f : {0.2, 0.4, 0.6, 0.8}) {
    const double ref = eta(gauss, f, ClipGeometry::opposite_side);
    CHECK(eta(lg, f, ClipGeometry::same_side) < ref);
    CHECK(eta(lg, f, ClipGeometry::opposite_side) < ref);
  }
}

TEST_CASE("noise model") {
  const NoiseModelParams p{5.5, 1.0};
  CHECK(noise_level(1.0, p) == doctest::Approx(0.2818).epsilon(1e-3));
  CHECK(noise_level(0.0, p) == 1.0);
  double last = 2.0;
  for (double e = 0.0; e <= 1.0; e += 0.05) {
    const double v = noise_level(e, p);
    CHECK(v <= last);
    last = v;
  }
  CHECK(noise_level(0.0, NoiseModelParams{4.0, 1.3}) == doctest::Approx(1.3));
  CHECK_THROWS_AS(noise_level(0.5, NoiseModelParams{-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(noise_level(0.5, NoiseModelParams{5.5, 0.9}), DomainError);
  CHECK_THROWS_AS(noise_level(1.5, p), DomainError);
}
