#include "rdwkit/kinematics.hpp"

#include "rdwkit/error.hpp"
#include "rdwkit/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <cctype>
#include <sstream>
#include <tuple>

namespace rdwkit {

GeometryParams GeometryParams::scaled(double factor) const noexcept {
  return {d2 * factor, d3 * factor, d4 * factor, r2 * factor, r3 * factor};
}

void GeometryParams::validate() const {
  const std::array<std::pair<const char*, double>, 5> fields{
      {{"d2", d2}, {"d3", d3}, {"d4", d4}, {"r2", r2}, {"r3", r3}}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || value < 0.0) {
      throw Error(ErrorCode::InvalidGeometry,
                  std::string(name) + " must be a finite length >= 0");
    }
  }
  if (!(d4 > 0.0)) throw Error(ErrorCode::InvalidGeometry, "d4 must be > 0");
}

std::string_view to_string(ManipulatorType type) noexcept {
  switch (type) {
    case ManipulatorType::B1: return "B1";
    case ManipulatorType::C: return "C";
    case ManipulatorType::E: return "E";
    case ManipulatorType::G: return "G";
    case ManipulatorType::H: return "H";
    case ManipulatorType::Generic: return "Generic";
  }
  return "Generic";
}

std::optional<ManipulatorType> parse_manipulator_type(std::string_view name) noexcept {
  for (auto type : {ManipulatorType::B1, ManipulatorType::C, ManipulatorType::E,
                    ManipulatorType::G, ManipulatorType::H, ManipulatorType::Generic}) {
    const auto tag = to_string(type);
    if (tag.size() == name.size() &&
        std::equal(tag.begin(), tag.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return type;
    }
  }
  return std::nullopt;
}

namespace {

struct LengthRule {
  const char* name;
  double value;
  bool nonzero;
};

void require(ManipulatorType type, std::initializer_list<LengthRule> rules) {
  for (const auto& rule : rules) {
    const bool ok = rule.nonzero ? rule.value != 0.0 : rule.value == 0.0;
    if (!ok) {
      std::ostringstream msg;
      msg << "type " << to_string(type) << " requires " << rule.name
          << (rule.nonzero ? " != 0" : " = 0") << " (got " << rule.name << "=" << rule.value
          << ")";
      throw Error(ErrorCode::InvalidGeometry, msg.str());
    }
  }
}

}  // namespace

void check_type(ManipulatorType type, const GeometryParams& g) {
  g.validate();
  switch (type) {
    case ManipulatorType::B1:
      require(type, {{"d3", g.d3, true}, {"d2", g.d2, false}, {"r2", g.r2, false},
                     {"r3", g.r3, false}});
      if (!(g.d3 > g.d4)) {
        std::ostringstream msg;
        msg << "type B1 requires d3 > d4 (got d3=" << g.d3 << ", d4=" << g.d4 << ")";
        throw Error(ErrorCode::InvalidGeometry, msg.str());
      }
      break;
    case ManipulatorType::C:
      require(type, {{"r2", g.r2, true}, {"d2", g.d2, false}, {"d3", g.d3, false},
                     {"r3", g.r3, false}});
      break;
    case ManipulatorType::E:
      require(type, {{"d2", g.d2, true}, {"d3", g.d3, false}, {"r2", g.r2, false},
                     {"r3", g.r3, false}});
      break;
    case ManipulatorType::G:
      require(type, {{"d3", g.d3, true}, {"r3", g.r3, true}, {"d2", g.d2, false},
                     {"r2", g.r2, false}});
      break;
    case ManipulatorType::H:
      require(type, {{"r2", g.r2, true}, {"r3", g.r3, true}, {"d2", g.d2, false},
                     {"d3", g.d3, false}});
      break;
    case ManipulatorType::Generic:
      break;
  }
}

Manipulator::Manipulator(ManipulatorType type, const GeometryParams& geom)
    : type_(type), geom_(geom) {
  check_type(type, geom);
}

double wrap_angle(double angle) noexcept {
  if (angle >= -std::numbers::pi && angle < std::numbers::pi) return angle;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back.
  return wrapped >= std::numbers::pi ? -std::numbers::pi : wrapped;
}

JointConfig JointConfig::canonical() const noexcept {
  return {wrap_angle(theta1), wrap_angle(theta2), wrap_angle(theta3)};
}

double angular_distance(const JointConfig& a, const JointConfig& b) noexcept {
  return std::max({std::abs(wrap_angle(a.theta1 - b.theta1)),
                   std::abs(wrap_angle(a.theta2 - b.theta2)),
                   std::abs(wrap_angle(a.theta3 - b.theta3))});
}

double distance(const CartesianPoint& a, const CartesianPoint& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

CartesianPoint forward_kinematics(const GeometryParams& g, const JointConfig& q) noexcept {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  const double u = g.d3 + g.d4 * c3;
  const double w = g.r2 + g.d4 * s3;
  const double x1 = g.d2 + u * c2 + g.r3 * s2;
  return {c1 * x1 - s1 * w, s1 * x1 + c1 * w, g.r3 * c2 - u * s2};
}

CrossSectionPoint cross_section(const CartesianPoint& p) noexcept {
  return {std::hypot(p.x, p.y), p.z};
}

JacobianMatrix jacobian(const GeometryParams& g, const JointConfig& q) noexcept {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c3 = std::cos(q.theta3), s3 = std::sin(q.theta3);
  const double u = g.d3 + g.d4 * c3;
  const double w = g.r2 + g.d4 * s3;
  const double x1 = g.d2 + u * c2 + g.r3 * s2;
  const double z1 = g.r3 * c2 - u * s2;

  // Columns in frame 1, then rotated about the base axis.
  const Eigen::Vector3d col2(z1, 0.0, -(u * c2 + g.r3 * s2));
  const double du = -g.d4 * s3;
  const Eigen::Vector3d col3(c2 * du, g.d4 * c3, -s2 * du);

  JacobianMatrix j;
  j(0, 0) = -s1 * x1 - c1 * w;
  j(1, 0) = c1 * x1 - s1 * w;
  j(2, 0) = 0.0;
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector3d& col = k == 0 ? col2 : col3;
    j(0, k + 1) = c1 * col.x() - s1 * col.y();
    j(1, k + 1) = s1 * col.x() + c1 * col.y();
    j(2, k + 1) = col.z();
  }
  return j;
}

double det_jacobian(const GeometryParams& geom, const JointConfig& q) noexcept {
  // theta1 only rotates the columns.
  return jacobian(geom, {0.0, q.theta2, q.theta3}).determinant();
}

double conditioning_index(const JacobianMatrix& j) {
  // Closed-form eigenvalues of J^T J are accurate to ~sqrt(eps) in the ratio;
  // near-singular matrices go through a full SVD instead.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
  eig.computeDirect(j.transpose() * j, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (!(ev(2) > 0.0)) return 0.0;
  const double ratio = std::sqrt(std::max(ev(0), 0.0) / ev(2));
  if (ratio > 1e-3) return std::min(ratio, 1.0);

  const Eigen::JacobiSVD<JacobianMatrix> svd(j);
  const auto& sv = svd.singularValues();
  const double largest = sv.maxCoeff();
  if (!(largest > 0.0)) return 0.0;
  return std::clamp(sv.minCoeff() / largest, 0.0, 1.0);
}

namespace {

constexpr double kDuplicateSeparation = 1e-6;

struct Candidate {
  double theta3;
  double a;  // x-coordinate offset of P1 minus d2, i.e. u cos t2 + r3 sin t2
  bool reduced_ok;
};

// Fixed-capacity list; the solvers never produce more than eight candidates.
template <typename T, std::size_t N>
class SmallList {
 public:
  void push_back(const T& v) {
    if (size_ < N) items_[size_++] = v;
  }
  const T* begin() const { return items_.data(); }
  const T* end() const { return items_.data() + size_; }
  T* begin() { return items_.data(); }
  T* end() { return items_.data() + size_; }

 private:
  std::array<T, N> items_{};
  std::size_t size_ = 0;
};

// Newton iterations on the FK residual; stops as soon as a step does not help.
CartesianPoint polish_newton(const GeometryParams& g, const CartesianPoint& target,
                             JointConfig& q, double good_enough) {
  CartesianPoint p = forward_kinematics(g, q);
  double res = distance(p, target);
  for (int iter = 0; iter < 3 && res > good_enough; ++iter) {
    const JacobianMatrix j = jacobian(g, q);
    JacobianMatrix inv;
    bool invertible = false;
    j.computeInverseWithCheck(inv, invertible, 1e-14 * j.cwiseAbs().maxCoeff());
    if (!invertible) break;
    const Eigen::Vector3d dq = inv * Eigen::Vector3d(target.x - p.x, target.y - p.y, target.z - p.z);
    const JointConfig next{q.theta1 + dq.x(), q.theta2 + dq.y(), q.theta3 + dq.z()};
    const CartesianPoint pn = forward_kinematics(g, next);
    const double rn = distance(pn, target);
    if (!(rn < res)) break;
    q = next;
    p = pn;
    res = rn;
  }
  return p;
}

}  // namespace

IkResult inverse_kinematics(const GeometryParams& g, const CartesianPoint& target, double tol) {
  const double scale = g.scale();
  if (!(tol > 0.0)) tol = 1e-9 * scale;
  const double scale2 = scale * scale;

  const double x = target.x, y = target.y, z = target.z;
  const double reach2 = x * x + y * y + z * z;
  const double base = g.d3 * g.d3 + g.d4 * g.d4 + g.r2 * g.r2 + g.r3 * g.r3;

  IkResult result;
  SmallList<Candidate, 8> candidates;

  // |P|^2 depends on theta3 only through u and w, which gives
  //   2 d2 A = |P|^2 - d2^2 - u^2 - r3^2 - w^2,   A^2 + z^2 = u^2 + r3^2,
  // where A = u cos t2 + r3 sin t2.
  const double k0 = reach2 - g.d2 * g.d2 - base;
  const double k1 = -2.0 * g.d3 * g.d4;
  const double k2 = -2.0 * g.r2 * g.d4;

  if (g.d2 <= 1e-12 * scale) {
    // Linear in (cos t3, sin t3): -k1 c3 - k2 s3 = k0.
    const double a = -k1, b = -k2;
    const double m = std::hypot(a, b);
    SmallList<double, 2> thetas;
    if (m <= 1e-12 * scale2) {
      if (std::abs(k0) <= 1e-9 * scale2) {
        result.degenerate = true;
        thetas.push_back(0.0);
      }
    } else {
      const double ratio = k0 / m;
      if (std::abs(ratio) <= 1.0 + 1e-9) {
        const double phi = std::atan2(b, a);
        const double spread = std::acos(std::clamp(ratio, -1.0, 1.0));
        thetas.push_back(phi + spread);
        thetas.push_back(phi - spread);
      }
    }
    for (double t3 : thetas) {
      const double u = g.d3 + g.d4 * std::cos(t3);
      const double a2 = u * u + g.r3 * g.r3 - z * z;
      if (a2 < -1e-9 * scale2) continue;
      const double amag = std::sqrt(std::max(a2, 0.0));
      candidates.push_back({t3, amag, true});
      candidates.push_back({t3, -amag, true});
    }
  } else {
    // K^2 + 4 d2^2 z^2 - 4 d2^2 (u^2 + r3^2) = 0, with K = k0 + k1 c3 + k2 s3,
    // as a quartic in t = tan(t3 / 2).
    const double dd = 4.0 * g.d2 * g.d2;
    const double l0 = k0 + k1, l1 = 2.0 * k2, l2 = k0 - k1;
    const double e = dd * (z * z - g.d3 * g.d3 - g.r3 * g.r3);
    const double gg = -2.0 * dd * g.d3 * g.d4;
    const double h = -dd * g.d4 * g.d4;
    const std::array<double, 5> quartic{
        l0 * l0 + e + gg + h,
        2.0 * l0 * l1,
        l1 * l1 + 2.0 * l0 * l2 + 2.0 * e - 2.0 * h,
        2.0 * l1 * l2,
        l2 * l2 + e - gg + h,
    };
    auto reduced = [&](double t3) {
      const double c3 = std::cos(t3), s3 = std::sin(t3);
      const double kk = k0 + k1 * c3 + k2 * s3;
      const double u = g.d3 + g.d4 * c3;
      return kk * kk + dd * z * z - dd * (u * u + g.r3 * g.r3);
    };
    SmallList<double, 5> thetas;
    for (double t : real_roots(quartic)) thetas.push_back(2.0 * std::atan(t));
    // t = infinity is lost when the leading coefficient vanishes.
    thetas.push_back(std::numbers::pi);
    for (double t3 : thetas) {
      const double kk = k0 + k1 * std::cos(t3) + k2 * std::sin(t3);
      const bool ok = std::abs(reduced(t3)) <= 1e-9 * scale2 * scale2;
      candidates.push_back({t3, kk / (2.0 * g.d2), ok});
    }
  }

  SmallList<JointConfig, 8> found;
  for (const auto& cand : candidates) {
    const double c3 = std::cos(cand.theta3), s3 = std::sin(cand.theta3);
    const double u = g.d3 + g.d4 * c3;
    const double w = g.r2 + g.d4 * s3;
    const double den = u * u + g.r3 * g.r3;
    double t2 = 0.0;
    if (den <= 1e-24 * scale2) {
      // theta2 is free: P1 = (d2, w, 0) for every theta2.
      result.degenerate = true;
    } else {
      const double c2 = (cand.a * u + z * g.r3) / den;
      const double s2 = (cand.a * g.r3 - z * u) / den;
      t2 = std::atan2(s2, c2);
    }
    const double t1 = std::atan2(y, x) - std::atan2(w, g.d2 + cand.a);
    JointConfig q{t1, t2, cand.theta3};
    const CartesianPoint p = polish_newton(g, target, q, 1e-3 * tol);
    const double res = distance(p, target);
    if (res <= tol) {
      found.push_back(q.canonical());
    } else if (cand.reduced_ok && res <= 1e-3 * scale) {
      result.tolerance_mismatch = true;
    }
  }

  std::sort(found.begin(), found.end(), [](const JointConfig& a, const JointConfig& b) {
    return std::tie(a.theta1, a.theta2, a.theta3) < std::tie(b.theta1, b.theta2, b.theta3);
  });
  result.solutions.reserve(4);
  for (const JointConfig& q : found) {
    const bool duplicate =
        std::any_of(result.solutions.begin(), result.solutions.end(), [&](const JointConfig& kept) {
          return angular_distance(kept, q) <= kDuplicateSeparation;
        });
    if (!duplicate) result.solutions.push_back(q);
  }
  return result;
}

}  // namespace rdwkit
