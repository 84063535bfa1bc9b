#pragma once

// Regular workspace and regular dextrous workspace (RDW) of one manipulator.
//
// Both are axis-aligned squares in the (rho, z) section; revolving them about
// the base axis gives the 3-D regions. The regular workspace square is the
// largest one free of singular points; the RDW square is the largest one
// whose scanned points all keep the conditioning index above a threshold.

#include "rdwkit/kinematics.hpp"
#include "rdwkit/optimize.hpp"
#include "rdwkit/singularity.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace rdwkit {

struct Square {
  CrossSectionPoint center;
  double half_edge = 0.0;

  double edge() const noexcept { return 2.0 * half_edge; }
};

/// How the conditioning index of the several IK solutions of one point is combined.
enum class Aggregate { Min, Max, First };

std::string_view to_string(Aggregate aggregate) noexcept;
std::optional<Aggregate> parse_aggregate(std::string_view name) noexcept;

/// Max of the coordinate-wise absolute differences.
double chebyshev_distance(const CrossSectionPoint& p, const CrossSectionPoint& q) noexcept;

/// Chebyshev distance from `center` to the closest singular sample; the
/// largest singularity-free square centred there has edge 2 * clearance.
double clearance(const CrossSectionPoint& center, const SingularSampleSet& samples);

/// True when the section point (rho, z) has at least one IK solution.
bool reachable(const GeometryParams& geom, const CrossSectionPoint& p);

/// The z = 0 interval between consecutive singular crossings used to seed the
/// free-square search.
struct FreeSegment {
  double rho_a = 0.0;
  double rho_b = 0.0;

  CrossSectionPoint midpoint() const noexcept { return {0.5 * (rho_a + rho_b), 0.0}; }
  double half_length() const noexcept { return 0.5 * (rho_b - rho_a); }
};

/// Widest interval between consecutive axis crossings whose midpoint is
/// reachable. Throws Error(NoFreeSegment).
FreeSegment free_segment(const GeometryParams& geom, const SingularSampleSet& samples);

/// Midpoint of free_segment(); always on z = 0.
CrossSectionPoint initial_center(const GeometryParams& geom, const SingularSampleSet& samples);

/// Largest singularity-free square: Hooke-Jeeves over the centre maximizing
/// clearance, started from initial_center(). Unreachable centres are infeasible.
Square max_free_square(const GeometryParams& geom, const SingularSampleSet& samples,
                       const HjOptions& opts);

/// Same, with step sizes derived from the free segment (10% of its
/// half-length initially, 1e-5 * scale minimum).
Square max_free_square(const GeometryParams& geom, const SingularSampleSet& samples);

/// Conditioning index of the section point (rho, z), aggregated over its IK
/// solutions. Throws Error(Unreachable) when there are none.
double conditioning_at(const GeometryParams& geom, const CrossSectionPoint& p,
                       Aggregate aggregate = Aggregate::Min);

/// Non-throwing variant; nullopt when unreachable.
std::optional<double> try_conditioning_at(const GeometryParams& geom, const CrossSectionPoint& p,
                                          Aggregate aggregate = Aggregate::Min);

/// Grows a square centred at `center` one lattice ring at a time over a
/// lattice of pitch `scan_step` anchored at the centre, until a point of the
/// new ring is unreachable, has rho < 0 or has conditioning below `k_min_inv`.
/// Returns the edge of the square whose boundary is the last passing ring,
/// 2 * rings * scan_step (0 when only the centre passes).
///
/// Throws Error(ZeroEdge) when the centre itself fails the threshold and
/// Error(Unreachable) when the centre has no IK solution.
double grow_square(const GeometryParams& geom, const CrossSectionPoint& center, double k_min_inv,
                   double scan_step, Aggregate aggregate = Aggregate::Min,
                   std::size_t* lattice_evals = nullptr);

/// Outcome of one square growth.
struct Growth {
  /// Number of complete lattice rings around the centre that passed.
  int rings = 0;
  /// 2 * rings * scan_step.
  double edge = 0.0;
  /// Share of admissible points on the first failing ring, in [0, 1).
  double next_ring_fraction = 0.0;
};

/// grow_square() with the failing ring evaluated completely.
Growth grow_square_detail(const GeometryParams& geom, const CrossSectionPoint& center,
                          double k_min_inv, double scan_step, Aggregate aggregate = Aggregate::Min,
                          std::size_t* lattice_evals = nullptr);

struct RdwConfig {
  int singular_grid = 1024;
  /// Singular-set spacing bound as a fraction of the maximal reach.
  double spacing_fraction = 1.0 / 500.0;
  /// Scan pitch is free-square edge / scan_divisions.
  int scan_divisions = 100;
  int reach_grid = 256;
  Aggregate aggregate = Aggregate::Min;
  double hj_initial_fraction = 0.1;
  double hj_shrink = 0.5;
  /// Minimum Hooke-Jeeves step as a fraction of the maximal reach.
  double hj_min_step_fraction = 1e-5;
  int hj_max_evals = 10'000;

  /// Reduced resolution used per cell in parameter sweeps.
  static RdwConfig sweep_defaults() noexcept;
  /// Every resolution knob doubled.
  RdwConfig refined() const noexcept;
  void validate() const;
};

struct RdwDiagnostics {
  int free_square_evals = 0;
  int rdw_evals = 0;
  bool budget_exhausted = false;
  std::size_t lattice_evals = 0;
  CrossSectionPoint initial_center;
  double initial_clearance = 0.0;
};

struct RdwResult {
  Square free_square;
  Square rdw_square;
  double k_min_inv = 0.0;
  double rho_max = 0.0;
  /// rdw_square.edge() / rho_max.
  double eta = 0.0;
  double scan_step = 0.0;
  std::size_t singular_samples = 0;
  RdwDiagnostics evals;
};

/// Full pipeline: singular set, free square, conditioning-bounded square
/// with its centre re-optimized, maximal reach and eta.
RdwResult compute_rdw(const GeometryParams& geom, double k_min_inv = 0.25,
                      const RdwConfig& config = {});

}  // namespace rdwkit
