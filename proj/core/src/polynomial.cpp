#include "rdwkit/polynomial.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <array>
#include <cmath>

namespace rdwkit {

double polyval(std::span<const double> coeffs, double t) noexcept {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

namespace {

double polyder_val(std::span<const double> coeffs, double t) noexcept {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * coeffs[i];
  return acc;
}

double polish(std::span<const double> coeffs, double t) {
  double best = t;
  double best_res = std::abs(polyval(coeffs, t));
  for (int iter = 0; iter < 4 && best_res > 0.0; ++iter) {
    const double d = polyder_val(coeffs, t);
    if (d == 0.0) break;
    t -= polyval(coeffs, t) / d;
    const double res = std::abs(polyval(coeffs, t));
    if (!std::isfinite(t) || res >= best_res) break;
    best = t;
    best_res = res;
  }
  return best;
}

}  // namespace

std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol,
                               double degenerate_tol) {
  double largest = 0.0;
  for (double c : coeffs) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return {};

  std::size_t degree = coeffs.size();
  while (degree > 0 && std::abs(coeffs[degree - 1]) <= degenerate_tol * largest) --degree;
  if (degree <= 1) return {};
  const std::span<const double> trimmed = coeffs.first(degree);

  std::vector<double> roots;
  if (degree == 2) {
    roots.push_back(-trimmed[0] / trimmed[1]);
  } else if (degree == 3) {
    // Stable quadratic formula.
    const double a = trimmed[2], b = trimmed[1], c = trimmed[0];
    double disc = b * b - 4.0 * a * c;
    const double slack = imag_tol * imag_tol * (b * b + std::abs(4.0 * a * c));
    if (disc < 0.0 && disc >= -slack) disc = 0.0;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) {
        roots.push_back(q / a);
        roots.push_back(c / q);
      } else {
        roots.push_back(0.0);
        roots.push_back(0.0);
      }
    }
  } else if (degree == 5 && std::abs(trimmed[1]) <= degenerate_tol * largest &&
             std::abs(trimmed[3]) <= degenerate_tol * largest) {
    // Biquadratic: solve for s = t^2.
    const std::array<double, 3> inner{trimmed[0], trimmed[2], trimmed[4]};
    for (double sq : real_roots(inner, imag_tol, degenerate_tol)) {
      if (sq < 0.0 && sq >= -imag_tol * imag_tol) sq = 0.0;
      if (sq < 0.0) continue;
      roots.push_back(std::sqrt(sq));
      roots.push_back(-std::sqrt(sq));
    }
  } else if (degree == 5) {
    Eigen::Matrix<double, 5, 1> poly;
    for (int i = 0; i < 5; ++i) poly[i] = trimmed[static_cast<std::size_t>(i)];
    Eigen::PolynomialSolver<double, 4> solver(poly);
    for (const auto& root : solver.roots()) {
      if (std::abs(root.imag()) <= imag_tol * (1.0 + std::abs(root))) roots.push_back(root.real());
    }
  } else {
    Eigen::VectorXd poly(static_cast<Eigen::Index>(degree));
    for (std::size_t i = 0; i < degree; ++i) poly[static_cast<Eigen::Index>(i)] = trimmed[i];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(poly);
    for (const auto& root : solver.roots()) {
      if (std::abs(root.imag()) <= imag_tol * (1.0 + std::abs(root))) roots.push_back(root.real());
    }
  }

  for (double& r : roots) r = polish(trimmed, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace rdwkit
