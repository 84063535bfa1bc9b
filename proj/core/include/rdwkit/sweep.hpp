#pragma once

// Parameter-space scans of eta for the five well-connected families, and
// isocontour extraction over the resulting grid.

#include "rdwkit/kinematics.hpp"
#include "rdwkit/rdw.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdwkit {

struct Axis {
  double min = 0.25;
  double max = 4.0;
  double step = 0.25;

  int count() const noexcept;
  double value(int index) const noexcept;
};

/// Names of the two swept lengths: B1/G -> (d3, d4), C/H -> (r2, d4), E -> (d2, d4).
std::array<std::string_view, 2> axis_names(ManipulatorType type);

/// Geometry of the family at one grid point; G and H use r3 = 1.
GeometryParams geometry_for(ManipulatorType type, double p1, double p2);

struct GridSpec {
  ManipulatorType type = ManipulatorType::C;
  Axis p1;
  Axis p2;

  static GridSpec uniform(ManipulatorType type, double min, double max, double step);
  void validate() const;
};

inline constexpr std::string_view kMaskB2Region = "type-B2 region";

struct EtaCell {
  double p1 = 0.0;
  double p2 = 0.0;
  double eta = 0.0;
  double a_rdw = 0.0;
  double rho_max = 0.0;
  CrossSectionPoint center;
  /// Empty for valid cells.
  std::string mask_reason;

  bool valid() const noexcept { return mask_reason.empty(); }
};

/// Row-major grid of cells: row index runs over p1, column index over p2.
struct EtaField {
  ManipulatorType type = ManipulatorType::Generic;
  std::vector<double> p1_values;
  std::vector<double> p2_values;
  std::vector<EtaCell> cells;

  std::size_t rows() const noexcept { return p1_values.size(); }
  std::size_t cols() const noexcept { return p2_values.size(); }
  const EtaCell& at(std::size_t i, std::size_t j) const { return cells.at(i * cols() + j); }
  EtaCell& at(std::size_t i, std::size_t j) { return cells.at(i * cols() + j); }

  /// Field value used for contouring: eta, or 0 for masked cells.
  double value(std::size_t i, std::size_t j) const;
  /// Valid cell with the largest eta (first in row-major order on ties);
  /// nullptr when every cell is masked.
  const EtaCell* max_cell() const noexcept;
};

struct SweepConfig {
  RdwConfig rdw = RdwConfig::sweep_defaults();
  /// Worker threads; 0 uses the machine's hardware concurrency.
  int jobs = 0;
  /// Called after every finished cell with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs compute_rdw for every cell. Failures are recorded in the cell's
/// mask_reason and never abort the sweep; results do not depend on `jobs`.
EtaField sweep_eta(const GridSpec& grid, double k_min_inv, const SweepConfig& config = {});

struct ParamPoint {
  double p1 = 0.0;
  double p2 = 0.0;
};

using Polyline = std::vector<ParamPoint>;

struct Contour {
  double level = 0.0;
  std::vector<Polyline> polylines;
};

struct ContourSet {
  std::vector<Contour> contours;
};

/// Marching squares with linear edge interpolation. Saddles are resolved by
/// the cell-centre average; masked cells count as below every level.
ContourSet extract_contours(const EtaField& field, std::span<const double> levels);

/// Bilinear interpolation of EtaField::value at a parameter-space point.
double interpolate(const EtaField& field, const ParamPoint& p);

/// Fraction of valid cells with eta >= level.
double region_area(const EtaField& field, double level);

// File formats.

void write_sweep_csv(std::ostream& out, const EtaField& field);
/// Throws Error(InvalidArgument) on malformed input.
EtaField read_sweep_csv(std::istream& in);

void write_contour_csv(std::ostream& out, const ContourSet& contours);
/// Fixed 800 x 800 viewport mapped onto the field's bounding box.
void write_contour_svg(std::ostream& out, const ContourSet& contours, const EtaField& field);

void write_singular_csv(std::ostream& out, const SingularSampleSet& samples);

}  // namespace rdwkit
