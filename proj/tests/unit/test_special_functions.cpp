#include "doctest.h"

#include <complex>

#include "twinbeam/special_functions.hpp"

using namespace twinbeam;
using cd = std::complex<double>;

namespace {

struct JRef {
  int n;
  double x;
  double value;
};

// 50-digit reference values
const JRef j_table[] = {
    {0, 0.5, 0.93846980724081290423},     {1, 0.5, 0.24226845767487388638},
    {0, 3.0, -0.26005195490193343762},    {2, 3.0, 0.48609126058589107691},
    {5, 3.0, 0.043028434877047583925},    {0, 10.0, -0.2459357644513483352},
    {4, 10.0, -0.21960268610200853513},   {10, 10.0, 0.2074861066333588577},
    {0, 30.0, -0.086367983581040211336},  {3, 30.0, 0.12921122875972498304},
    {20, 30.0, 0.0048310199934040645386}, {0, 150.0, -0.00077409037539429124695},
    {7, 150.0, 0.064435954968208054453},  {40, 150.0, -0.053178029743433989334},
    {64, 150.0, 0.065897347715264459217}, {0, 199.5, -0.039613637334785146078},
    {30, 25.5, 0.016602615428697620112},  {20, 60.0, 0.10266020557876329043},
};

double signed_j(int n, double x) {
  return n >= 0 ? bessel_j(n, x) : ((-n) % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
}

}  // namespace

TEST_CASE("bessel_j at the origin") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(2, 0.0) == 0.0);
}

TEST_CASE("bessel_j against high-precision values") {
  for (const auto& r : j_table) {
    INFO("n = " << r.n << ", x = " << r.x);
    CHECK(std::abs(bessel_j(r.n, r.x) - r.value) < 1e-12);
  }
}

TEST_CASE("bessel_j at large arguments") {
  CHECK(std::abs(bessel_j(2, 10000.3) - 0.0078573807893245810349) < 1e-12);
  CHECK(std::abs(bessel_j(0, 12345.678) - 0.000030586713322758247441) < 1e-12);
}

TEST_CASE("bessel_j parity and range errors") {
  CHECK(bessel_j(3, -2.0) == doctest::Approx(-bessel_j(3, 2.0)).epsilon(1e-15));
  CHECK(bessel_j(4, -2.0) == doctest::Approx(bessel_j(4, 2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bessel_j(65, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(0, std::nan("")), DomainError);
}

TEST_CASE("first zero of J0 by bisection on the implementation") {
  double lo = 2.0;
  double hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(0, mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(0.5 * (lo + hi) - 2.404825557695772768621632) < 1e-12);
}

TEST_CASE("Jacobi-Anger expansion truncated at |n| <= 40") {
  const double rho = 5.0;
  const double phi = 1.1;
  cd sum = 0.0;
  for (int n = -40; n <= 40; ++n) {
    sum += std::pow(cd(0.0, 1.0), n) * signed_j(n, rho) * std::exp(cd(0.0, n * phi));
  }
  CHECK(std::abs(sum - std::exp(cd(0.0, rho * std::cos(phi)))) < 1e-10);
}

TEST_CASE("modified_bessel_i elementary values") {
  CHECK(modified_bessel_i(0, 0.0) == cd(1.0, 0.0));
  CHECK(modified_bessel_i(3, 0.0) == cd(0.0, 0.0));
  CHECK_THROWS_AS(modified_bessel_i(0, cd(501.0, 0.0)), BesselOverflowError);
  try {
    modified_bessel_i(1, cd(600.0, 10.0));
  } catch (const BesselOverflowError& e) {
    CHECK(e.exponent() == doctest::Approx(600.0));
  }
}

TEST_CASE("I_nu(ix) = i^nu J_nu(x)") {
  for (int nu : {0, 2, 4}) {
    for (double x : {0.5, 3.0, 10.0}) {
      const cd lhs = modified_bessel_i(nu, cd(0.0, x));
      const cd rhs = std::pow(cd(0.0, 1.0), nu) * bessel_j(nu, x);
      CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
    }
  }
}

TEST_CASE("I_2(1+2i) against an independent 30-term series") {
  const cd z(1.0, 2.0);
  cd term = 0.25 * z * z * 0.5;
  cd sum = term;
  for (int k = 1; k < 30; ++k) {
    term *= 0.25 * z * z / (static_cast<double>(k) * (k + 2));
    sum += term;
  }
  const cd v = modified_bessel_i(2, z);
  CHECK(std::abs(v - sum) / std::abs(sum) < 1e-13);
  CHECK(std::abs(v - cd(-0.41267190829317053113, 0.26597392279838853886)) < 1e-14);
}

TEST_CASE("modified_bessel_i against high-precision values") {
  struct Ref {
    int nu;
    cd z;
    cd value;
  };
  const Ref refs[] = {
      {0, {3.0, 0.0}, {4.8807925858650240856, 0.0}},
      {1, {5.0, 1.0}, {14.669122344321995721, 19.249347323683048461}},
      {2, {20.0, -7.0}, {32319780.665735498423, -21130592.562153970816}},
      {3, {-4.0, 6.0}, {-5.7081245572712556638, -1.3349971980769646159}},
      {0, {100.0, 50.0}, {8.9201571531473441177e+41, -4.8477725586972895177e+41}},
      {6, {0.5, 1.2}, {0.000068786377875396368565, 0.000073120718258612849816}},
      {10, {300.0, 0.0}, {3.7877259258668686766e+128, 0.0}},
  };
  for (const auto& r : refs) {
    INFO("nu = " << r.nu << ", z = " << r.z);
    CHECK(std::abs(modified_bessel_i(r.nu, r.z) - r.value) / std::abs(r.value) < 1e-12);
  }
}
