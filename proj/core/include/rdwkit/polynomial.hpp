#pragma once

#include <span>
#include <vector>

namespace rdwkit {

/// Evaluates sum coeffs[i] * t^i.
double polyval(std::span<const double> coeffs, double t) noexcept;

/// Real roots of the polynomial with ascending coefficients, sorted ascending.
///
/// Leading coefficients below `degenerate_tol` times the largest coefficient
/// magnitude are dropped before solving, so a quartic whose leading term
/// vanishes is solved as a cubic (or lower). Complex roots whose imaginary
/// part is within `imag_tol * (1 + |root|)` are kept as real (tangential
/// double roots split into near-real pairs), and every kept root gets a few
/// Newton iterations on the original polynomial.
std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol = 1e-6,
                               double degenerate_tol = 1e-12);

}  // namespace rdwkit
