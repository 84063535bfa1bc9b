#pragma once

// Positional kinematics of 3R orthogonal manipulators.
//
// Frame convention (modified DH, one transform per joint):
//
//   T_i = RotX(alpha_i) * TransX(d_i) * RotZ(theta_i) * TransZ(r_i)
//
// with (alpha1, d1, r1) = (0, 0, 0), (alpha2, d2, r2) = (-90 deg, d2, r2) and
// (alpha3, d3, r3) = (+90 deg, d3, r3). The operation point P sits at
// (d4, 0, 0) in frame 3. Written out:
//
//   u = d3 + d4 cos(t3)            w = r2 + d4 sin(t3)
//   P1 = (d2 + u cos(t2) + r3 sin(t2),  w,  r3 cos(t2) - u sin(t2))
//   P  = RotZ(t1) * P1

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

namespace rdwkit {

/// The five DH lengths of one manipulator. Twist angles are fixed.
struct GeometryParams {
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 1.0;
  double r2 = 0.0;
  double r3 = 0.0;

  /// Sum of all lengths; the natural length scale for tolerances.
  double scale() const noexcept { return d2 + d3 + d4 + r2 + r3; }
  GeometryParams scaled(double factor) const noexcept;

  /// Throws Error(InvalidGeometry) unless all lengths are finite, >= 0 and d4 > 0.
  void validate() const;

  bool operator==(const GeometryParams&) const = default;
};

enum class ManipulatorType { B1, C, E, G, H, Generic };

std::string_view to_string(ManipulatorType type) noexcept;
std::optional<ManipulatorType> parse_manipulator_type(std::string_view name) noexcept;

/// Throws Error(InvalidGeometry) naming the first violated membership rule.
void check_type(ManipulatorType type, const GeometryParams& geom);

/// A geometry tagged with the family it belongs to; membership is checked on
/// construction.
class Manipulator {
 public:
  Manipulator(ManipulatorType type, const GeometryParams& geom);

  ManipulatorType type() const noexcept { return type_; }
  const GeometryParams& geometry() const noexcept { return geom_; }

  /// True for the five families with a well-connected workspace.
  bool well_connected() const noexcept { return type_ != ManipulatorType::Generic; }

 private:
  ManipulatorType type_;
  GeometryParams geom_;
};

/// Wraps an angle into [-pi, pi).
double wrap_angle(double angle) noexcept;

struct JointConfig {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  JointConfig canonical() const noexcept;
};

/// Largest absolute wrapped difference between the angles of two configurations.
double angular_distance(const JointConfig& a, const JointConfig& b) noexcept;

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const CartesianPoint& a, const CartesianPoint& b) noexcept;

/// A point of the half-plane (rho, z) section; rho is the distance to the base axis.
struct CrossSectionPoint {
  double rho = 0.0;
  double z = 0.0;

  bool operator==(const CrossSectionPoint&) const = default;
};

using JacobianMatrix = Eigen::Matrix3d;

CartesianPoint forward_kinematics(const GeometryParams& geom, const JointConfig& q) noexcept;

CrossSectionPoint cross_section(const CartesianPoint& p) noexcept;

/// Analytic positional Jacobian, J(i, j) = dP_i / dtheta_j.
JacobianMatrix jacobian(const GeometryParams& geom, const JointConfig& q) noexcept;

/// Determinant of the Jacobian. Independent of theta1.
double det_jacobian(const GeometryParams& geom, const JointConfig& q) noexcept;

/// Ratio of smallest to largest singular value; 0 when J vanishes.
double conditioning_index(const JacobianMatrix& j);

struct IkResult {
  /// Distinct solutions sorted lexicographically by canonical angles.
  std::vector<JointConfig> solutions;
  /// A candidate satisfied the reduced polynomial but failed the FK round trip.
  bool tolerance_mismatch = false;
  /// Target lies where the solution set is a continuum; one representative per branch is returned.
  bool degenerate = false;
};

/// All real inverse kinematic solutions (0 to 4 for the studied families).
/// `tol` bounds |FK(q) - target| for every returned q; tol <= 0 selects 1e-9 * scale.
IkResult inverse_kinematics(const GeometryParams& geom, const CartesianPoint& target,
                            double tol = 0.0);

}  // namespace rdwkit
