#pragma once

// Hooke-Jeeves pattern search (maximization).

#include <functional>
#include <span>
#include <vector>

namespace rdwkit {

struct HjOptions {
  double initial_step = 0.1;
  double shrink_factor = 0.5;
  double min_step = 1e-5;
  int max_evals = 10'000;

  /// Throws Error(InvalidArgument) on inconsistent settings.
  void validate() const;
};

struct HjResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  /// max_evals was reached before the step fell below min_step.
  bool budget_exhausted = false;
  /// Objective value of every accepted base point, in order; starts with f(x0).
  std::vector<double> accepted;
};

/// Objective to maximize. Return -infinity for infeasible points.
using Objective = std::function<double(std::span<const double>)>;

/// Classic exploratory + pattern move scheme. Exploration probes +step then
/// -step along each coordinate in order and keeps the first improvement; a
/// successful exploration is followed by the pattern move
/// x_new = x_k + (x_k - x_{k-1}); a failed one shrinks the step.
HjResult hooke_jeeves(const Objective& objective, std::vector<double> x0, const HjOptions& opts);

}  // namespace rdwkit
