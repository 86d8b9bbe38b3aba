#include "twinbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twinbeam/errors.hpp"
#include "twinbeam/parallel.hpp"
#include "twinbeam/special_functions.hpp"

namespace twinbeam {

using cd = std::complex<double>;

namespace {

constexpr std::size_t max_breakpoints = 400000;

// Points where chirp q^2 + linear q crosses multiples of pi/2 on (0, q_max),
// plus a uniform floor of panels so smooth envelopes are resolved too.
std::vector<double> phase_breakpoints(double q_max, double chirp, double linear, int min_panels = 16) {
  std::vector<double> cuts;
  chirp = std::abs(chirp);
  linear = std::abs(linear);
  const double total_phase = chirp * q_max * q_max + linear * q_max;
  const double count = total_phase / (0.5 * pi);
  if (count < static_cast<double>(max_breakpoints)) {
    for (int j = 1; j < count; ++j) {
      const double target = 0.5 * pi * j;
      const double q = chirp > 0.0 ? 2.0 * target / (linear + std::sqrt(linear * linear + 4.0 * chirp * target))
                                   : target / linear;
      cuts.push_back(q);
    }
  } else {
    for (std::size_t j = 1; j < max_breakpoints; ++j) cuts.push_back(q_max * j / max_breakpoints);
  }
  for (int j = 1; j < min_panels; ++j) cuts.push_back(q_max * j / min_panels);
  return cuts;
}

double oam_sign(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

double log_c_unpropagated(int m, double w) {
  return 2.0 * m * std::log(w) - std::log(pi) - std::lgamma(m + 1.0) - (3.0 * m + 2.0) * std::log(2.0);
}

IntegralCheck make_check(cd quad, cd closed) {
  IntegralCheck c{quad, closed, 0.0};
  const double diff = std::abs(quad - closed);
  c.residual = std::abs(closed) > 0.0 ? diff / std::abs(closed) : diff;
  return c;
}

}  // namespace

void RadialProfile::validate() const {
  if (radii.size() != values.size()) throw DomainError("radial profile: radii and values differ in length");
  if (radii.empty() || radii.front() != 0.0) throw DomainError("radial profile: radii must start at 0");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw DomainError("radial profile: radii must be strictly increasing");
  }
}

double jacobi_anger_residual(double rho, double phi, int n_max) {
  if (n_max < 0 || n_max > max_bessel_order) throw DomainError("jacobi_anger_residual: n_max outside [0, 64]");
  cd sum = bessel_j(0, rho);
  for (int n = 1; n <= n_max; ++n) {
    const double jn = bessel_j(n, rho);
    const cd in = std::pow(cd(0.0, 1.0), n);
    // J_{-n} = (-1)^n J_n and i^{-n} = (-1)^n i^n, so the pair combines to i^n J_n 2 cos(n phi)
    sum += in * jn * 2.0 * std::cos(n * phi);
  }
  return std::abs(sum - std::exp(cd(0.0, rho * std::cos(phi))));
}

IntegralCheck verify_weber_integral(int nu, double a, double b, cd p2, const QuadratureSpec& spec) {
  spec.validate();
  if (!(p2.real() > 0.0)) throw DomainError("Weber integral: Re p^2 must be positive");
  if (nu < 0) throw DomainError("Weber integral: order must be >= 0");
  const double t_max = spec.q_max.value_or(std::sqrt(50.0 / p2.real()));
  const auto cuts = phase_breakpoints(t_max, p2.imag(), std::abs(a) + std::abs(b));
  const auto r = integrate(
      [&](double t) { return t * std::exp(-p2 * t * t) * bessel_j(nu, a * t) * bessel_j(nu, b * t); }, 0.0, t_max,
      spec, cuts);
  const cd closed = std::exp(-(a * a + b * b) / (4.0 * p2)) * modified_bessel_i(nu, a * b / (2.0 * p2)) / (2.0 * p2);
  return make_check(r.value, closed);
}

IntegralCheck verify_gaussian_moment_integral(int nu, cd b, cd p2, const QuadratureSpec& spec) {
  spec.validate();
  if (!(p2.real() > 0.0)) throw DomainError("Gaussian moment integral: Re p^2 must be positive");
  if (nu < 0) throw DomainError("Gaussian moment integral: order must be >= 0");
  // log-envelope (nu+1) ln t + |Re b| t - Re p2 t^2; cut 46 e-folds below its peak
  const double rb = std::abs(b.real());
  const double rp = p2.real();
  auto envelope = [&](double t) { return (nu + 1.0) * std::log(t) + rb * t - rp * t * t; };
  const double t_peak = (rb + std::sqrt(rb * rb + 8.0 * rp * (nu + 1.0))) / (4.0 * rp);
  double t_max = 2.0 * t_peak + 1.0 / std::sqrt(rp);
  while (envelope(t_max) > envelope(t_peak) - 46.0) t_max *= 1.2;
  if (spec.q_max) t_max = *spec.q_max;
  const auto cuts = phase_breakpoints(t_max, p2.imag(), std::abs(b.imag()));
  const auto r = integrate(
      [&](double t) { return std::pow(t, nu + 1) * modified_bessel_i(nu, b * t) * std::exp(-p2 * t * t); }, 0.0,
      t_max, spec, cuts);
  const cd closed = (nu == 0 ? cd(1.0) : std::pow(b, nu)) * std::exp(b * b / (4.0 * p2)) / std::pow(2.0 * p2, nu + 1);
  return make_check(r.value, closed);
}

namespace {

template <class Check>
HomotopyCheck walk(int steps, Check&& at) {
  if (steps < 1) throw DomainError("homotopy: need at least one step");
  HomotopyCheck h;
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    const IntegralCheck c = at(s);
    if (!h.checks.empty()) {
      const cd prev = h.checks.back().closed_form;
      const double scale = std::max(std::abs(prev), std::abs(c.closed_form));
      if (scale > 0.0) h.max_step_change = std::max(h.max_step_change, std::abs(c.closed_form - prev) / scale);
    }
    h.max_residual = std::max(h.max_residual, c.residual);
    h.s.push_back(s);
    h.checks.push_back(c);
  }
  return h;
}

}  // namespace

HomotopyCheck weber_homotopy(int nu, double a, double b, cd p2, int steps, const QuadratureSpec& spec) {
  return walk(steps, [&](double s) { return verify_weber_integral(nu, a, b, cd(p2.real(), s * p2.imag()), spec); });
}

HomotopyCheck gaussian_moment_homotopy(int nu, cd b, cd p2, int steps, const QuadratureSpec& spec) {
  return walk(steps, [&](double s) {
    return verify_gaussian_moment_integral(nu, std::polar(std::abs(b), s * std::arg(b)), cd(p2.real(), s * p2.imag()),
                                           spec);
  });
}

cd sum_coordinate_integral(double rho_plus, double z, const PumpParams& pump, const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho_plus >= 0.0) || !(z >= 0.0)) throw DomainError("sum_coordinate_integral: rho and z must be >= 0");
  const int m = std::abs(pump.oam());
  const double w = pump.waist();
  const cd p2(w * w / 8.0, z / (4.0 * pump.wavenumber()));
  const double q_auto = std::max(std::sqrt((46.0 + 2.0 * (2.0 * m + 1.0)) / p2.real()), 12.0 / w);
  const double q_max = spec.q_max.value_or(q_auto);
  const auto cuts = phase_breakpoints(q_max, p2.imag(), 0.5 * rho_plus);
  // I_2l(i x) = i^{2|l|} J_2|l|(x); the J form stays bounded at any argument
  const double sign = oam_sign(m);
  const auto r = integrate(
      [&](double q) {
        return sign * std::pow(q, 2 * m + 1) * std::exp(-p2 * q * q) * bessel_j(2 * m, 0.5 * q * rho_plus);
      },
      0.0, q_max, spec, cuts);
  return r.value;
}

namespace {

cd difference_cos_gauss(double rho, double zeta, double c, const SincApprox& approx, const QuadratureSpec& spec) {
  const double q_auto = std::max(std::sqrt(48.0 / (approx.b() * c)), 8.0 / std::sqrt(c));
  const double q_max = spec.q_max.value_or(q_auto);
  const auto cuts = phase_breakpoints(q_max, std::abs(zeta) + approx.a() * c, 0.5 * rho);
  const auto r = integrate(
      [&](double q) {
        const double u = c * q * q;
        return q * std::exp(cd(-approx.b() * u, -zeta * q * q)) * std::cos(approx.a() * u) * bessel_j(0, 0.5 * q * rho);
      },
      0.0, q_max, spec, cuts);
  return r.value;
}

cd difference_exact(double rho, double zeta, double c, const QuadratureSpec& spec) {
  const double omega_a = c - zeta;  // e^{+i omega_a q^2} / (2 i c q)
  const double omega_b = c + zeta;  // -e^{-i omega_b q^2} / (2 i c q)
  const double omega_min = std::min(std::abs(omega_a), omega_b);
  if (omega_min < 1e-3 * c) {
    throw DomainError("exact-sinc mode: tail chirp vanishes at this z (z/4k too close to L/8k)");
  }
  // main part: at least ten sinc lobes and past the stationary point of the J_0 phase
  double q_main = std::max(8.0 / std::sqrt(c), rho / (2.0 * omega_min));
  if (spec.q_max) q_main = std::max(q_main, *spec.q_max);
  const auto cuts = phase_breakpoints(q_main, c + std::abs(zeta), 0.5 * rho);
  const auto main = integrate(
      [&](double q) { return q * std::exp(cd(0.0, -zeta * q * q)) * sinc(c * q * q) * bessel_j(0, 0.5 * q * rho); },
      0.0, q_main, spec, cuts);

  cd tail_total = 0.0;
  double tail_error = 0.0;
  for (int term = 0; term < 2; ++term) {
    const double omega = term == 0 ? omega_a : -omega_b;
    const cd weight = (term == 0 ? 1.0 : -1.0) / cd(0.0, 2.0 * c);
    auto f = [&](double q) { return weight * std::exp(cd(0.0, omega * q * q)) * bessel_j(0, 0.5 * q * rho) / q; };
    const double lobe = pi / std::abs(omega);
    auto node = [&](long j) { return std::sqrt(j * lobe); };
    long j = static_cast<long>(std::ceil(q_main * q_main / lobe));
    if (node(j) <= q_main) ++j;
    std::vector<cd> partial;
    cd running = integrate(f, q_main, node(j), spec).value;
    partial.push_back(running);
    constexpr int lobes = 48;
    for (int n = 0; n < lobes; ++n, ++j) {
      running += integrate(f, node(j), node(j + 1), spec).value;
      partial.push_back(running);
    }
    const cd full = euler_limit<cd>(partial);
    const cd shorter = euler_limit<cd>(std::span<const cd>(partial.data(), partial.size() - 1));
    tail_total += full;
    tail_error += std::abs(full - shorter);
  }
  const cd total = main.value + tail_total;
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  if (tail_error > 100.0 * target) {
    throw ConvergenceError("exact-sinc tail: accelerated lobe sums did not settle", std::abs(total), tail_error);
  }
  return total;
}

}  // namespace

cd difference_coordinate_integral(double rho_minus, double z, const PumpParams& pump, const MediumParams& medium,
                                  const SincApprox& approx, SincMode mode, const QuadratureSpec& spec) {
  spec.validate();
  if (!(rho_minus >= 0.0) || !(z >= 0.0)) throw DomainError("difference_coordinate_integral: rho and z must be >= 0");
  const double k = pump.wavenumber();
  const double zeta = z / (4.0 * k);
  const double c = medium.cell_length() / (8.0 * k);
  return mode == SincMode::cos_gauss ? difference_cos_gauss(rho_minus, zeta, c, approx, spec)
                                     : difference_exact(rho_minus, zeta, c, spec);
}

cd position_amplitude_quadrature(Vec2 rho_plus, double rho_minus, const PumpParams& pump, const MediumParams& medium,
                                 const SincApprox& approx, SincMode mode, const QuadratureSpec& spec) {
  const int l = pump.oam();
  const int m = std::abs(l);
  // the sum-coordinate integral at z = 0 is (-1)^|l| times the J_2l form
  const cd s = oam_sign(m) * sum_coordinate_integral(rho_plus.norm(), 0.0, pump, spec);
  if (s == cd(0.0)) return 0.0;
  const cd d = difference_coordinate_integral(rho_minus, 0.0, pump, medium, approx, mode, spec);
  const double c = std::exp(log_c_unpropagated(m, pump.waist()));
  return -c * std::exp(cd(0.0, -2.0 * l * rho_plus.azimuth())) * s * d;
}

cd propagated_amplitude_quadrature(Vec2 rho_plus, double rho_minus, const Plane& plane, const PumpParams& pump,
                                   const MediumParams& medium, const SincApprox& approx, SincMode mode,
                                   const QuadratureSpec& spec) {
  const int l = pump.oam();
  const int m = std::abs(l);
  const cd s = sum_coordinate_integral(rho_plus.norm(), plane.z(), pump, spec);
  if (s == cd(0.0)) return 0.0;
  const cd d = difference_coordinate_integral(rho_minus, plane.z(), pump, medium, approx, mode, spec);
  const double c = std::exp(log_c_unpropagated(m, pump.waist()));
  const double phase = -2.0 * l * rho_plus.azimuth() + std::fmod(2.0 * pump.wavenumber() * plane.z(), two_pi);
  return 4.0 * c * std::exp(cd(0.0, phase)) * s * d;
}

RadialProfile radial_oracle(ReducedFactor factor, std::span<const double> radii, const Plane& plane,
                            const PumpParams& pump, const MediumParams& medium, const SincApprox& approx,
                            SincMode mode, const QuadratureSpec& spec, int threads) {
  RadialProfile out;
  out.radii.assign(radii.begin(), radii.end());
  out.values.assign(radii.size(), cd(0.0));
  out.order = factor == ReducedFactor::sum ? 2 * std::abs(pump.oam()) : 0;
  out.validate();
  const int m = std::abs(pump.oam());
  const double c = 4.0 * std::exp(log_c_unpropagated(m, pump.waist()));
  const cd carrier = std::exp(cd(0.0, std::fmod(2.0 * pump.wavenumber() * plane.z(), two_pi)));
  parallel_for(radii.size(), threads, [&](std::size_t i) {
    out.values[i] = factor == ReducedFactor::sum
                        ? c * carrier * sum_coordinate_integral(radii[i], plane.z(), pump, spec)
                        : difference_coordinate_integral(radii[i], plane.z(), pump, medium, approx, mode, spec);
  });
  return out;
}

std::shared_ptr<const RadialTable> difference_table(const Plane& plane, const PumpParams& pump,
                                                    const MediumParams& medium, const SincApprox& approx,
                                                    SincMode mode, double r_max, int samples,
                                                    const QuadratureSpec& spec, int threads) {
  if (!(r_max > 0.0) || samples < 2) throw DomainError("difference_table: need r_max > 0 and at least two samples");
  std::vector<double> radii(samples);
  for (int i = 0; i < samples; ++i) radii[i] = r_max * i / (samples - 1);
  const RadialProfile p =
      radial_oracle(ReducedFactor::difference, radii, plane, pump, medium, approx, mode, spec, threads);
  auto table = std::make_shared<RadialTable>();
  table->r_max = r_max;
  // the integral is half of G- (cos = sum of two chirps, each giving e^{...}/(2 p))
  for (const cd& v : p.values) table->values.push_back(2.0 * v);
  return table;
}

namespace {

template <class T>
std::size_t argmax_abs(std::span<const T> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return best;
}

template <class T>
double normalized_l2(std::span<const T> value, std::span<const T> reference) {
  if (value.size() != reference.size() || value.empty()) throw DomainError("normalized_l2_error: size mismatch");
  const T sv = value[argmax_abs(value)];
  const T sr = reference[argmax_abs(reference)];
  if (std::abs(sv) == 0.0 || std::abs(sr) == 0.0) throw DegenerateError("normalized_l2_error: all-zero input");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const T a = value[i] / sv;
    const T b = reference[i] / sr;
    num += std::norm(a - b);
    den += std::norm(b);
  }
  return std::sqrt(num / den);
}

}  // namespace

double normalized_l2_error(std::span<const cd> value, std::span<const cd> reference) {
  return normalized_l2<cd>(value, reference);
}

double normalized_l2_error(std::span<const double> value, std::span<const double> reference) {
  return normalized_l2<double>(value, reference);
}

}  // namespace twinbeam
