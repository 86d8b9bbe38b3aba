#include "twinbeam/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twinbeam/errors.hpp"

namespace twinbeam {

using cd = std::complex<double>;

AmplitudeCoefficients AmplitudeCoefficients::compute(const Plane& plane, const PumpParams& pump,
                                                     const MediumParams& medium, const SincApprox& approx) {
  const double w = pump.waist();
  const double k = pump.wavenumber();
  const double z = plane.z();
  const double L = medium.cell_length();
  const int m = std::abs(pump.oam());
  AmplitudeCoefficients c;
  c.alpha = 1.0 / cd(w * w / 8.0, z / (4.0 * k));
  c.beta = approx.b() * L / (8.0 * k);
  c.gamma_plus = z / (4.0 * k) + approx.a() * L / (8.0 * k);
  c.gamma_minus = z / (4.0 * k) - approx.a() * L / (8.0 * k);
  c.log_c_prime = 2.0 * m * std::log(w) - std::log(pi) - std::lgamma(m + 1.0) - (5.0 * m + 1.0) * std::log(2.0);
  c.c_prime = std::exp(c.log_c_prime);
  return c;
}

std::complex<double> momentum_amplitude(Vec2 q_probe, Vec2 q_conjugate, const PumpParams& pump,
                                        const MediumParams& medium) {
  const Vec2 qp = q_probe + q_conjugate;
  const Vec2 qm = q_probe - q_conjugate;
  return pump_sum_spectrum(qp.norm(), qp.azimuth(), pump.waist(), pump.oam()) *
         phase_matching_sinc(qm.norm(), medium.cell_length(), pump.wavenumber());
}

TwoPhotonAmplitude::TwoPhotonAmplitude(const Plane& plane, const PumpParams& pump, const MediumParams& medium,
                                       const SincApprox& approx)
    : plane_(plane), pump_(pump), medium_(medium), approx_(approx) {
  coeffs_ = AmplitudeCoefficients::compute(plane, pump, medium, approx);
  const double w = pump.waist();
  const double k = pump.wavenumber();
  // Re > 0 for every z >= 0, so the principal Log never meets its cut
  sum_base_log_ = std::log(cd(w * w / 4.0, plane.z() / (2.0 * k)));
  p2_plus_ = cd(w * w / 8.0, plane.z() / (4.0 * k));
}

std::complex<double> TwoPhotonAmplitude::sum_factor(Vec2 rho_plus) const {
  const int l = pump_.oam();
  const int m = std::abs(l);
  const double r = rho_plus.norm();
  if (m > 0 && r == 0.0) return 0.0;
  const double k = pump_.wavenumber();
  const double z = plane_.z();
  // magnitude and phase collected in one exponent so large |l| cannot under- or overflow midway
  cd log_g = coeffs_.log_c_prime - (2.0 * m + 1.0) * sum_base_log_ - r * r / (16.0 * p2_plus_);
  if (m > 0) log_g += 2.0 * m * std::log(r);
  const double phase = -2.0 * l * rho_plus.azimuth() + std::fmod(2.0 * k * z, two_pi);
  return std::exp(log_g + cd(0.0, phase));
}

double TwoPhotonAmplitude::sum_intensity(double rho_plus) const {
  return std::norm(sum_factor({rho_plus, 0.0}));
}

double TwoPhotonAmplitude::log_sum_intensity(double rho_plus) const {
  const int m = std::abs(pump_.oam());
  if (m > 0 && rho_plus == 0.0) return -std::numeric_limits<double>::infinity();
  double log_g = coeffs_.log_c_prime - ((2.0 * m + 1.0) * sum_base_log_).real() -
                 (rho_plus * rho_plus / (16.0 * p2_plus_)).real();
  if (m > 0) log_g += 2.0 * m * std::log(rho_plus);
  return 2.0 * log_g;
}

std::complex<double> RadialTable::operator()(double r) const {
  const std::size_t n = values.size();
  if (n < 4 || r < 0.0 || r > r_max) return 0.0;
  // four-point Lagrange cubic on the stencil nearest r
  const double f = r / r_max * static_cast<double>(n - 1);
  const auto i0 = static_cast<std::size_t>(std::clamp(std::floor(f) - 1.0, 0.0, static_cast<double>(n - 4)));
  const double t = f - static_cast<double>(i0);
  const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return w0 * values[i0] + w1 * values[i0 + 1] + w2 * values[i0 + 2] + w3 * values[i0 + 3];
}

std::complex<double> TwoPhotonAmplitude::difference_factor(double rho_minus) const {
  if (difference_table_) return (*difference_table_)(rho_minus);
  const double r2 = rho_minus * rho_minus;
  cd g = 0.0;
  for (double gamma : {coeffs_.gamma_plus, coeffs_.gamma_minus}) {
    const cd d(coeffs_.beta, gamma);
    g += std::exp(-r2 / (16.0 * d)) / (2.0 * d);
  }
  return g;
}

std::complex<double> TwoPhotonAmplitude::propagated(Vec2 probe, Vec2 conjugate) const {
  const ReducedCoords red = to_reduced(probe, conjugate);
  return sum_factor(red.plus) * difference_factor(red.rho_minus());
}

double TwoPhotonAmplitude::log_probability(Vec2 probe, Vec2 conjugate) const {
  const ReducedCoords red = to_reduced(probe, conjugate);
  return log_sum_intensity(red.rho_plus()) + std::log(std::norm(difference_factor(red.rho_minus())));
}

double TwoPhotonAmplitude::difference_radius_estimate() const {
  const double beta = coeffs_.beta;
  const double g = std::max(std::abs(coeffs_.gamma_plus), std::abs(coeffs_.gamma_minus));
  return 4.0 * std::sqrt((beta * beta + g * g) / beta);
}

double TwoPhotonAmplitude::sum_radius_estimate() const {
  return 4.0 * std::sqrt(std::norm(p2_plus_) / p2_plus_.real());
}

std::complex<double> difference_factor_unequal_weights(const AmplitudeCoefficients& c, double rho_minus) {
  const double r2 = rho_minus * rho_minus;
  cd g = 0.0;
  for (double gamma : {c.gamma_plus, c.gamma_minus}) {
    const cd d(c.beta, gamma);
    g += std::exp(-r2 / (16.0 * d)) / cd(4.0 * c.beta, gamma);
  }
  return g;
}

}  // namespace twinbeam
