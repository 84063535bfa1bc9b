#include "rdwkit/optimize.hpp"

#include "rdwkit/error.hpp"

#include <cmath>

namespace rdwkit {

void HjOptions::validate() const {
  if (!(initial_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial_step must be > 0");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "shrink_factor must lie in (0, 1)");
  }
  if (!(min_step > 0.0 && min_step < initial_step)) {
    throw Error(ErrorCode::InvalidArgument, "min_step must lie in (0, initial_step)");
  }
  if (max_evals < 1) throw Error(ErrorCode::InvalidArgument, "max_evals must be >= 1");
}

namespace {

class Search {
 public:
  Search(const Objective& objective, int max_evals) : objective_(objective), max_evals_(max_evals) {}

  bool exhausted() const noexcept { return evals_ >= max_evals_; }
  int evals() const noexcept { return evals_; }

  double eval(std::span<const double> x) {
    ++evals_;
    const double f = objective_(x);
    return std::isnan(f) ? -INFINITY : f;
  }

  // Returns the improved value (or f if nothing improved); x is updated in place.
  double explore(std::vector<double>& x, double f, double step) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double origin = x[i];
      bool moved = false;
      for (double sign : {1.0, -1.0}) {
        if (exhausted()) break;
        x[i] = origin + sign * step;
        const double trial = eval(x);
        if (trial > f) {
          f = trial;
          moved = true;
          break;
        }
      }
      if (!moved) x[i] = origin;
    }
    return f;
  }

 private:
  const Objective& objective_;
  int max_evals_;
  int evals_ = 0;
};

// A pattern move whose exploration lands back on the base point (up to
// rounding) is not progress.
bool moved(const std::vector<double>& a, const std::vector<double>& b, double step) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) >= 0.5 * step) return true;
  }
  return false;
}

}  // namespace

HjResult hooke_jeeves(const Objective& objective, std::vector<double> x0, const HjOptions& opts) {
  opts.validate();
  if (x0.empty()) throw Error(ErrorCode::InvalidArgument, "hooke_jeeves needs n >= 1");

  Search search(objective, opts.max_evals);
  HjResult result;
  std::vector<double> base = std::move(x0);
  double f_base = search.eval(base);
  result.accepted.push_back(f_base);
  double step = opts.initial_step;

  while (step >= opts.min_step && !search.exhausted()) {
    std::vector<double> trial = base;
    double f_trial = search.explore(trial, f_base, step);
    if (!(f_trial > f_base)) {
      step *= opts.shrink_factor;
      continue;
    }
    // Pattern moves while they keep paying off.
    while (f_trial > f_base && moved(trial, base, step)) {
      std::vector<double> previous = std::move(base);
      base = trial;
      f_base = f_trial;
      result.accepted.push_back(f_base);
      if (search.exhausted()) break;

      std::vector<double> pattern(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) pattern[i] = 2.0 * base[i] - previous[i];
      const double f_pattern = search.eval(pattern);
      trial = pattern;
      f_trial = search.explore(trial, f_pattern, step);
    }
  }

  result.budget_exhausted = step >= opts.min_step && search.exhausted();
  result.x = std::move(base);
  result.f = f_base;
  result.evals = search.evals();
  return result;
}

}  // namespace rdwkit
