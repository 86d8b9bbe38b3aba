#include "twinbeam/quadrature.hpp"

namespace twinbeam {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (q_max && !(*q_max > 0.0)) throw DomainError("quadrature truncation q_max must be positive");
  if (max_subdivisions < 1) throw DomainError("quadrature max_subdivisions must be >= 1");
  if (trapezoid_panels < 1) throw DomainError("quadrature trapezoid_panels must be >= 1");
}

}  // namespace twinbeam
