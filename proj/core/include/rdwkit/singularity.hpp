#pragma once

#include "rdwkit/kinematics.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace rdwkit {

/// Point-cloud sampling of the image of det J = 0 in the (rho, z) section.
struct SingularSampleSet {
  std::vector<CrossSectionPoint> points;
  /// (theta2, theta3) preimage of each point, theta1 = 0.
  std::vector<std::array<double, 2>> preimages;
  int resolution = 0;
  /// Spacing bound that was requested.
  double spacing = 0.0;
  /// Largest image distance between adjacent samples along any traced branch.
  double max_gap = 0.0;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Absolute |det J| accepted as singular for this geometry (1e-9 * scale^3).
double singular_tolerance(const GeometryParams& geom) noexcept;

/// Scans det J over a grid_n x grid_n periodic grid in (theta2, theta3),
/// bisects every sign change on a grid edge, traces the zero set through
/// each cell and subdivides until adjacent images are at most `spacing`
/// apart. Samples come back sorted by (rho, z).
///
/// Throws Error(EmptySingularSet) when no sign change exists.
SingularSampleSet singular_set(const GeometryParams& geom, int grid_n = 1024, double spacing = 0.0);

/// Clusters samples within |z| <= band by rho and returns one rho per
/// cluster, ascending. band <= 0 selects 2 * max_gap.
///
/// Throws Error(EmptyCrossings) when no sample lies in the band.
std::vector<double> axis_crossings(const SingularSampleSet& samples, double band = 0.0);

/// Maximal distance of P from the base origin over all configurations.
double max_reach(const GeometryParams& geom, int grid_n = 256);

}  // namespace rdwkit
