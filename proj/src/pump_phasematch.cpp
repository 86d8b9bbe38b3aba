#include "twinbeam/pump_phasematch.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "twinbeam/core_model.hpp"
#include "twinbeam/quadrature.hpp"

namespace twinbeam {

namespace {

void check_oam(int oam) {
  if (std::abs(oam) > max_oam_index) throw DomainError("OAM index |l| exceeds 20");
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

std::complex<double> lg_field(double rho, double phi, double waist, int oam) {
  check_oam(oam);
  if (!(rho >= 0.0)) throw DomainError("lg_field: rho must be >= 0");
  if (!(waist > 0.0)) throw DomainError("lg_field: waist must be positive");
  const int m = std::abs(oam);
  if (rho == 0.0) {
    return m == 0 ? std::complex<double>(std::sqrt(2.0 / pi) / waist, 0.0) : std::complex<double>(0.0, 0.0);
  }
  const double log_mag = 0.5 * (std::log(2.0 / pi) - log_factorial(m)) - std::log(waist) +
                         m * std::log(std::sqrt(2.0) * rho / waist) - rho * rho / (waist * waist);
  return std::polar(std::exp(log_mag), -oam * phi);
}

std::complex<double> pump_sum_spectrum(double q_plus, double phi_plus, double waist, int oam) {
  check_oam(oam);
  if (!(q_plus >= 0.0)) throw DomainError("pump_sum_spectrum: q must be >= 0");
  if (!(waist > 0.0)) throw DomainError("pump_sum_spectrum: waist must be positive");
  const int m = std::abs(oam);
  if (q_plus == 0.0) {
    return m == 0 ? std::complex<double>(1.0 / (2.0 * pi), 0.0) : std::complex<double>(0.0, 0.0);
  }
  const double log_mag = -std::log(pi) - log_factorial(m) + 2.0 * m * std::log(waist) -
                         (3.0 * m + 1.0) * std::log(2.0) + 2.0 * m * std::log(q_plus) -
                         q_plus * q_plus * waist * waist / 8.0;
  return std::polar(std::exp(log_mag), -2.0 * oam * phi_plus);
}

double phase_matching_sinc(double q_minus, double cell_length, double wavenumber) {
  return sinc(cell_length * q_minus * q_minus / (8.0 * wavenumber));
}

SincApprox::SincApprox(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("sinc approximation: a must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("sinc approximation: b must be positive");
}

double cos_gauss_sinc(double x, const SincApprox& approx) {
  const double u = x * x;
  return std::cos(approx.a() * u) * std::exp(-approx.b() * u);
}

double sinc_fit_objective(double a, double b, double u_min, double u_max) {
  if (!(u_max > u_min)) throw DomainError("sinc fit: empty range");
  QuadratureSpec spec;
  // d^2 carries rounding noise of order 1e-16 |d|, so the absolute floor
  // scales with the range rather than sitting at zero
  spec.abs_tol = 1e-18 * (u_max - u_min);
  spec.rel_tol = 1e-11;
  std::vector<double> cuts;
  for (double u = std::ceil(u_min / pi) * pi; u < u_max; u += pi) cuts.push_back(u);
  const auto r = integrate(
      [a, b](double u) {
        const double d = sinc(u) - std::cos(a * u) * std::exp(-b * u);
        return d * d;
      },
      u_min, u_max, spec, cuts);
  return r.value / (u_max - u_min);
}

namespace {

struct FitRange {
  double lo;
  double hi;
};

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* r = static_cast<const FitRange*>(params);
  return sinc_fit_objective(gsl_vector_get(v, 0), gsl_vector_get(v, 1), r->lo, r->hi);
}

// Smallest eigenvalue of the central-difference Hessian.
double hessian_min_eigenvalue(double a, double b, const FitRange& r) {
  const double h = 1e-3;
  auto f = [&r](double x, double y) { return sinc_fit_objective(x, y, r.lo, r.hi); };
  const double f0 = f(a, b);
  const double haa = (f(a + h, b) - 2.0 * f0 + f(a - h, b)) / (h * h);
  const double hbb = (f(a, b + h) - 2.0 * f0 + f(a, b - h)) / (h * h);
  const double hab = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4.0 * h * h);
  const double mean = 0.5 * (haa + hbb);
  const double rad = std::hypot(0.5 * (haa - hbb), hab);
  return mean - rad;
}

}  // namespace

SincFit fit_sinc_approx(const SincFitOptions& options) {
  if (!(options.u_max > options.u_min) || !(options.u_min >= 0.0) || !std::isfinite(options.u_max)) {
    throw DomainError("fit_sinc_approx: range must satisfy 0 <= u_min < u_max");
  }
  FitRange range{options.u_min, options.u_max};

  gsl_multimin_function fn;
  fn.n = 2;
  fn.f = &gsl_objective;
  fn.params = &range;

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(2), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(2), &gsl_vector_free);
  gsl_vector_set(x.get(), 0, options.start_a);
  gsl_vector_set(x.get(), 1, options.start_b);
  gsl_vector_set_all(step.get(), 0.05);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());

  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < options.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), options.tolerance);
  }

  SincFit fit;
  fit.a = gsl_vector_get(solver->x, 0);
  fit.b = gsl_vector_get(solver->x, 1);
  fit.objective = solver->fval;
  fit.iterations = iter;
  fit.hessian_min_eigenvalue = hessian_min_eigenvalue(fit.a, fit.b, range);
  fit.ill_conditioned = fit.hessian_min_eigenvalue < 1e-8;
  if (status != GSL_SUCCESS) {
    throw SincFitError("fit_sinc_approx: simplex did not converge within " + std::to_string(iter) + " iterations",
                       fit);
  }
  return fit;
}

}  // namespace twinbeam
