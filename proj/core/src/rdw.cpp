#include "rdwkit/rdw.hpp"

#include "rdwkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rdwkit {

std::string_view to_string(Aggregate aggregate) noexcept {
  switch (aggregate) {
    case Aggregate::Min: return "min";
    case Aggregate::Max: return "max";
    case Aggregate::First: return "first";
  }
  return "min";
}

std::optional<Aggregate> parse_aggregate(std::string_view name) noexcept {
  if (name == "min") return Aggregate::Min;
  if (name == "max") return Aggregate::Max;
  if (name == "first") return Aggregate::First;
  return std::nullopt;
}

double chebyshev_distance(const CrossSectionPoint& p, const CrossSectionPoint& q) noexcept {
  return std::max(std::abs(p.rho - q.rho), std::abs(p.z - q.z));
}

double clearance(const CrossSectionPoint& center, const SingularSampleSet& samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty singular sample set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : samples.points) best = std::min(best, chebyshev_distance(center, s));
  return best;
}

namespace {

CartesianPoint lift(const CrossSectionPoint& p) noexcept { return {p.rho, 0.0, p.z}; }

}  // namespace

bool reachable(const GeometryParams& geom, const CrossSectionPoint& p) {
  return !inverse_kinematics(geom, lift(p)).solutions.empty();
}

FreeSegment free_segment(const GeometryParams& geom, const SingularSampleSet& samples) {
  const std::vector<double> crossings = axis_crossings(samples);
  std::optional<FreeSegment> best;
  for (std::size_t k = 0; k + 1 < crossings.size(); ++k) {
    const FreeSegment candidate{crossings[k], crossings[k + 1]};
    if (!reachable(geom, candidate.midpoint())) continue;
    if (!best || candidate.half_length() > best->half_length()) best = candidate;
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no reachable interval between the " << crossings.size() << " z = 0 crossings";
    throw Error(ErrorCode::NoFreeSegment, msg.str());
  }
  return *best;
}

CrossSectionPoint initial_center(const GeometryParams& geom, const SingularSampleSet& samples) {
  return free_segment(geom, samples).midpoint();
}

namespace {

Square optimize_free_square(const GeometryParams& geom, const SingularSampleSet& samples,
                            const CrossSectionPoint& start, const HjOptions& opts, int* evals) {
  const HjResult best = hooke_jeeves(
      [&](std::span<const double> c) {
        const CrossSectionPoint center{c[0], c[1]};
        if (!reachable(geom, center)) return -std::numeric_limits<double>::infinity();
        return clearance(center, samples);
      },
      {start.rho, start.z}, opts);
  if (evals) *evals = best.evals;
  return {{best.x[0], best.x[1]}, std::max(best.f, 0.0)};
}

HjOptions free_square_options(const GeometryParams& geom, const FreeSegment& segment) {
  HjOptions opts;
  opts.initial_step = 0.1 * segment.half_length();
  opts.min_step = std::min(1e-5 * geom.scale(), 0.5 * opts.initial_step);
  return opts;
}

}  // namespace

Square max_free_square(const GeometryParams& geom, const SingularSampleSet& samples,
                       const HjOptions& opts) {
  return optimize_free_square(geom, samples, initial_center(geom, samples), opts, nullptr);
}

Square max_free_square(const GeometryParams& geom, const SingularSampleSet& samples) {
  const FreeSegment segment = free_segment(geom, samples);
  return optimize_free_square(geom, samples, segment.midpoint(),
                              free_square_options(geom, segment), nullptr);
}

std::optional<double> try_conditioning_at(const GeometryParams& geom, const CrossSectionPoint& p,
                                          Aggregate aggregate) {
  const IkResult ik = inverse_kinematics(geom, lift(p));
  if (ik.solutions.empty()) return std::nullopt;
  double lo = 1.0, hi = 0.0;
  for (const auto& q : ik.solutions) {
    const double k = conditioning_index(jacobian(geom, q));
    if (aggregate == Aggregate::First) return k;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  return aggregate == Aggregate::Min ? lo : hi;
}

double conditioning_at(const GeometryParams& geom, const CrossSectionPoint& p,
                       Aggregate aggregate) {
  const auto k = try_conditioning_at(geom, p, aggregate);
  if (!k) {
    std::ostringstream msg;
    msg << "point (rho=" << p.rho << ", z=" << p.z << ") has no IK solution";
    throw Error(ErrorCode::Unreachable, msg.str());
  }
  return *k;
}

namespace {

struct GrowthRun {
  Growth growth;
  std::size_t evals = 0;
};

GrowthRun run_growth(const GeometryParams& geom, const CrossSectionPoint& center,
                     double k_min_inv, double scan_step, Aggregate aggregate, bool full_last_ring) {
  if (!(k_min_inv > 0.0 && k_min_inv <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "k_min_inv must lie in (0, 1]");
  }
  if (!(scan_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "scan_step must be > 0");

  GrowthRun run;
  auto admissible = [&](int i, int j) {
    ++run.evals;
    const CrossSectionPoint p{center.rho + i * scan_step, center.z + j * scan_step};
    if (p.rho < 0.0) return false;
    const auto k = try_conditioning_at(geom, p, aggregate);
    return k && *k >= k_min_inv;
  };

  const auto k0 = try_conditioning_at(geom, center, aggregate);
  ++run.evals;
  if (!k0) throw Error(ErrorCode::Unreachable, "square centre has no IK solution");
  if (*k0 < k_min_inv || center.rho < 0.0) {
    throw Error(ErrorCode::ZeroEdge, "square centre violates the conditioning threshold");
  }

  // The square reported is spanned by the outermost passing ring, so its
  // boundary is itself tested. Rings are tested once each.
  constexpr int kMaxRings = 1 << 20;
  int rings = 0;
  while (rings < kMaxRings) {
    const int r = rings + 1;
    int passed = 0;
    bool ok = true;
    // Walk the four sides together so an early failure is found quickly.
    for (int t = -r; t < r && (ok || full_last_ring); ++t) {
      for (const auto& [i, j] : {std::pair{t, -r}, std::pair{r, t}, std::pair{-t, r},
                                  std::pair{-r, -t}}) {
        if (!ok && !full_last_ring) break;
        if (admissible(i, j)) {
          ++passed;
        } else {
          ok = false;
        }
      }
    }
    if (!ok) {
      run.growth.next_ring_fraction = static_cast<double>(passed) / (8.0 * r);
      break;
    }
    rings = r;
  }
  run.growth.rings = rings;
  run.growth.edge = 2 * rings * scan_step;
  return run;
}

}  // namespace

Growth grow_square_detail(const GeometryParams& geom, const CrossSectionPoint& center,
                          double k_min_inv, double scan_step, Aggregate aggregate,
                          std::size_t* lattice_evals) {
  const GrowthRun run = run_growth(geom, center, k_min_inv, scan_step, aggregate, true);
  if (lattice_evals) *lattice_evals += run.evals;
  return run.growth;
}

double grow_square(const GeometryParams& geom, const CrossSectionPoint& center, double k_min_inv,
                   double scan_step, Aggregate aggregate, std::size_t* lattice_evals) {
  const GrowthRun run = run_growth(geom, center, k_min_inv, scan_step, aggregate, false);
  if (lattice_evals) *lattice_evals += run.evals;
  return run.growth.edge;
}

RdwConfig RdwConfig::sweep_defaults() noexcept {
  RdwConfig config;
  config.singular_grid = 512;
  config.scan_divisions = 60;
  return config;
}

RdwConfig RdwConfig::refined() const noexcept {
  RdwConfig config = *this;
  config.singular_grid *= 2;
  config.spacing_fraction *= 0.5;
  config.scan_divisions *= 2;
  config.reach_grid *= 2;
  config.hj_min_step_fraction *= 0.5;
  return config;
}

void RdwConfig::validate() const {
  if (singular_grid < 64) throw Error(ErrorCode::InvalidArgument, "singular grid must be >= 64");
  if (reach_grid < 64) throw Error(ErrorCode::InvalidArgument, "reach grid must be >= 64");
  if (!(spacing_fraction > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "spacing fraction must be > 0");
  }
  if (scan_divisions < 1) throw Error(ErrorCode::InvalidArgument, "scan divisions must be >= 1");
  if (!(hj_initial_fraction > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "initial step fraction must be > 0");
  }
  if (!(hj_min_step_fraction > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "min step fraction must be > 0");
  }
  if (!(hj_shrink > 0.0 && hj_shrink < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "shrink factor must lie in (0, 1)");
  }
  if (hj_max_evals < 1) throw Error(ErrorCode::InvalidArgument, "max evals must be >= 1");
}

RdwResult compute_rdw(const GeometryParams& geom, double k_min_inv, const RdwConfig& config) {
  geom.validate();
  config.validate();
  if (!(k_min_inv > 0.0 && k_min_inv < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "k_min_inv must lie in (0, 1)");
  }

  RdwResult result;
  result.k_min_inv = k_min_inv;
  result.rho_max = max_reach(geom, config.reach_grid);
  const double min_step = config.hj_min_step_fraction * result.rho_max;

  const SingularSampleSet samples =
      singular_set(geom, config.singular_grid, config.spacing_fraction * result.rho_max);
  result.singular_samples = samples.size();

  const FreeSegment segment = free_segment(geom, samples);
  result.evals.initial_center = segment.midpoint();
  result.evals.initial_clearance = clearance(segment.midpoint(), samples);

  HjOptions free_opts;
  free_opts.initial_step = config.hj_initial_fraction * segment.half_length();
  free_opts.shrink_factor = config.hj_shrink;
  free_opts.min_step = std::min(min_step, 0.5 * free_opts.initial_step);
  free_opts.max_evals = config.hj_max_evals;
  result.free_square = optimize_free_square(geom, samples, segment.midpoint(), free_opts,
                                            &result.evals.free_square_evals);

  result.scan_step = result.free_square.edge() / config.scan_divisions;
  if (!(result.scan_step > 0.0)) {
    throw Error(ErrorCode::ZeroEdge, "singularity-free square has zero edge");
  }

  std::size_t lattice = 0;
  HjOptions rdw_opts = free_opts;
  rdw_opts.initial_step = config.hj_initial_fraction * result.free_square.half_edge;
  rdw_opts.min_step = std::min(min_step, 0.5 * rdw_opts.initial_step);
  // The edge is quantized to the scan pitch; the admissible share of the
  // first failing ring breaks ties so the search can leave plateaus.
  const HjResult rdw = hooke_jeeves(
      [&](std::span<const double> c) {
        try {
          const Growth g = grow_square_detail(geom, {c[0], c[1]}, k_min_inv, result.scan_step,
                                              config.aggregate, &lattice);
          return g.edge + result.scan_step * g.next_ring_fraction;
        } catch (const Error& e) {
          if (e.code() == ErrorCode::ZeroEdge) return 0.0;
          return -std::numeric_limits<double>::infinity();
        }
      },
      {result.free_square.center.rho, result.free_square.center.z}, rdw_opts);

  result.evals.rdw_evals = rdw.evals;
  result.evals.budget_exhausted = rdw.budget_exhausted;
  double edge = 0.0;
  if (std::isfinite(rdw.f) && rdw.f > 0.0) {
    edge = grow_square(geom, {rdw.x[0], rdw.x[1]}, k_min_inv, result.scan_step, config.aggregate,
                       &lattice);
  }
  result.evals.lattice_evals = lattice;
  result.rdw_square = {{rdw.x[0], rdw.x[1]}, 0.5 * edge};
  result.eta = result.rdw_square.edge() / result.rho_max;
  return result;
}

}  // namespace rdwkit
