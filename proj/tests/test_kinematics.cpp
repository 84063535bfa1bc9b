#include "rdwkit/error.hpp"
#include "rdwkit/kinematics.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace rdwkit {
namespace {

using test::kExampleC;
using test::kWellConnected;

// sigma_min / sigma_max from the characteristic polynomial of J^T J, solved
// with the trigonometric cubic formula.
double conditioning_oracle(const JacobianMatrix& j) {
  const Eigen::Matrix3d a = j.transpose() * j;
  const double c2 = -a.trace();
  const double c1 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                    a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const double c0 = -a.determinant();
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  double lo = 0.0, hi = 0.0;
  if (p > -1e-300) {
    lo = hi = -c2 / 3.0;
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    double roots[3];
    for (int k = 0; k < 3; ++k) {
      roots[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - c2 / 3.0;
    }
    lo = *std::min_element(roots, roots + 3);
    hi = *std::max_element(roots, roots + 3);
  }
  if (hi <= 0.0) return 0.0;
  return std::sqrt(std::max(lo, 0.0) / hi);
}

TEST(ForwardKinematics, SingleLinkSweepsUnitSphere) {
  std::mt19937_64 rng(1);
  const GeometryParams g{0.0, 0.0, 1.0, 0.0, 0.0};
  for (int n = 0; n < 100; ++n) {
    const CartesianPoint p = forward_kinematics(g, test::random_config(rng));
    EXPECT_NEAR(std::hypot(p.x, p.y, p.z), 1.0, 1e-14);
  }
}

TEST(ForwardKinematics, HomePositions) {
  const CrossSectionPoint c = cross_section(forward_kinematics(kExampleC, {}));
  EXPECT_NEAR(c.rho, std::sqrt(3.25), 1e-12);
  EXPECT_NEAR(c.z, 0.0, 1e-12);

  const CrossSectionPoint b = cross_section(forward_kinematics({0.0, 4.0, 2.2, 0.0, 0.0}, {}));
  EXPECT_NEAR(b.rho, 6.2, 1e-12);
  EXPECT_NEAR(b.z, 0.0, 1e-12);
}

TEST(ForwardKinematics, SectionIgnoresBaseRotation) {
  std::mt19937_64 rng(2);
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    JointConfig q = test::random_config(rng);
    const CrossSectionPoint a = cross_section(forward_kinematics(g, q));
    q.theta1 += 1.234;
    const CrossSectionPoint b = cross_section(forward_kinematics(g, q));
    EXPECT_NEAR(a.rho, b.rho, 1e-12 * g.scale());
    EXPECT_NEAR(a.z, b.z, 1e-12 * g.scale());
  }
}

TEST(CrossSection, Examples) {
  EXPECT_EQ(cross_section({0, 0, 0}), (CrossSectionPoint{0, 0}));
  EXPECT_EQ(cross_section({3, 4, 1}), (CrossSectionPoint{5, 1}));
  EXPECT_EQ(cross_section({-3, 4, -1}), (CrossSectionPoint{5, -1}));
}

TEST(Jacobian, FirstColumnIsAxisCrossPosition) {
  std::mt19937_64 rng(3);
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    const JointConfig q = test::random_config(rng);
    const CartesianPoint p = forward_kinematics(g, q);
    const JacobianMatrix j = jacobian(g, q);
    EXPECT_NEAR(j(0, 0), -p.y, 1e-12 * g.scale());
    EXPECT_NEAR(j(1, 0), p.x, 1e-12 * g.scale());
    EXPECT_NEAR(j(2, 0), 0.0, 1e-12 * g.scale());
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(4);
  constexpr double h = 1e-5;
  for (auto type : kWellConnected) {
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const GeometryParams g = test::random_geometry(type, rng);
      const JointConfig q = test::random_config(rng);
      const JacobianMatrix j = jacobian(g, q);
      for (int c = 0; c < 3; ++c) {
        JointConfig qp = q, qm = q;
        double* ap = c == 0 ? &qp.theta1 : c == 1 ? &qp.theta2 : &qp.theta3;
        double* am = c == 0 ? &qm.theta1 : c == 1 ? &qm.theta2 : &qm.theta3;
        *ap += h;
        *am -= h;
        const CartesianPoint pp = forward_kinematics(g, qp), pm = forward_kinematics(g, qm);
        const Eigen::Vector3d fd{(pp.x - pm.x) / (2 * h), (pp.y - pm.y) / (2 * h),
                                 (pp.z - pm.z) / (2 * h)};
        worst = std::max(worst, (j.col(c) - fd).cwiseAbs().maxCoeff() / g.scale());
      }
    }
    EXPECT_LE(worst, 1e-6) << to_string(type);
  }
}

TEST(Jacobian, ScalesLinearlyWithLengths) {
  std::mt19937_64 rng(5);
  const GeometryParams g = test::random_geometry(ManipulatorType::G, rng);
  const JointConfig q = test::random_config(rng);
  const JacobianMatrix a = jacobian(g, q), b = jacobian(g.scaled(3.0), q);
  EXPECT_LE((b - 3.0 * a).cwiseAbs().maxCoeff(), 1e-12 * g.scale());
}

TEST(DetJacobian, TypeCFactorization) {
  std::mt19937_64 rng(6);
  const double r2 = kExampleC.r2, d4 = kExampleC.d4;
  for (int n = 0; n < 100; ++n) {
    const JointConfig q = test::random_config(rng);
    const double expected = r2 * d4 * d4 * std::cos(q.theta2) * std::pow(std::cos(q.theta3), 2);
    EXPECT_NEAR(std::abs(det_jacobian(kExampleC, q)), std::abs(expected), 1e-12);
    EXPECT_NEAR(std::abs(jacobian(kExampleC, q).determinant()), std::abs(expected), 1e-12);
  }
}

TEST(DetJacobian, TypeCSingularConfigurations) {
  for (double t : {-2.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(det_jacobian(kExampleC, {0.3, std::numbers::pi / 2, t}), 0.0, 1e-12);
    EXPECT_NEAR(det_jacobian(kExampleC, {0.3, t, std::numbers::pi / 2}), 0.0, 1e-12);
    EXPECT_NEAR(det_jacobian(kExampleC, {0.3, t, -std::numbers::pi / 2}), 0.0, 1e-12);
  }
}

TEST(DetJacobian, IndependentOfBaseAngle) {
  std::mt19937_64 rng(7);
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    const JointConfig q = test::random_config(rng);
    const double a = det_jacobian(g, {0.0, q.theta2, q.theta3});
    const double b = det_jacobian(g, {1.7, q.theta2, q.theta3});
    EXPECT_NEAR(a, b, 1e-12 * std::pow(g.scale(), 3));
    const double ka = conditioning_index(jacobian(g, {0.0, q.theta2, q.theta3}));
    const double kb = conditioning_index(jacobian(g, {1.7, q.theta2, q.theta3}));
    EXPECT_NEAR(ka, kb, 1e-12);
  }
}

TEST(ConditioningIndex, Examples) {
  EXPECT_DOUBLE_EQ(conditioning_index(JacobianMatrix::Identity()), 1.0);
  EXPECT_NEAR(conditioning_index(Eigen::Vector3d(2, 1, 4).asDiagonal().toDenseMatrix()), 0.25,
              1e-15);
  JacobianMatrix singular;
  singular << 1, 2, 3, 4, 5, 6, 5, 7, 9;
  EXPECT_NEAR(conditioning_index(singular), 0.0, 1e-12);
  EXPECT_EQ(conditioning_index(JacobianMatrix::Zero()), 0.0);
}

TEST(ConditioningIndex, AgreesWithCharacteristicPolynomial) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  for (int n = 0; n < 1000; ++n) {
    JacobianMatrix j;
    for (int k = 0; k < 9; ++k) j(k / 3, k % 3) = entry(rng);
    EXPECT_NEAR(conditioning_index(j), conditioning_oracle(j), 1e-7);
  }
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    const JacobianMatrix j = jacobian(g, test::random_config(rng));
    EXPECT_NEAR(conditioning_index(j), conditioning_oracle(j), 1e-7);
  }
}

TEST(ConditioningIndex, NearlySingularMatrices) {
  const JacobianMatrix j = Eigen::Vector3d(1.0, 1e-9, 0.5).asDiagonal().toDenseMatrix();
  EXPECT_NEAR(conditioning_index(j), 1e-9, 1e-15);
}

TEST(ConditioningIndex, ScaleInvariant) {
  std::mt19937_64 rng(9);
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    const JointConfig q = test::random_config(rng);
    const double k = conditioning_index(jacobian(g, q));
    for (double lambda : {0.1, 3.0, 10.0}) {
      EXPECT_NEAR(conditioning_index(jacobian(g.scaled(lambda), q)), k, 1e-12 * k);
    }
  }
}

TEST(InverseKinematics, RoundTripContainsOriginalConfiguration) {
  std::mt19937_64 rng(10);
  for (auto type : kWellConnected) {
    int missing = 0, wrong_count = 0;
    double worst_residual = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const GeometryParams g = test::random_geometry(type, rng);
      const JointConfig q = test::random_config(rng);
      const CartesianPoint target = forward_kinematics(g, q);
      const IkResult ik = inverse_kinematics(g, target);
      if (ik.solutions.size() != 4) ++wrong_count;
      bool found = false;
      for (const auto& s : ik.solutions) {
        worst_residual = std::max(worst_residual, distance(forward_kinematics(g, s), target) / g.scale());
        found = found || angular_distance(s, q) <= 1e-9;
      }
      if (!found) ++missing;
    }
    EXPECT_EQ(missing, 0) << to_string(type);
    EXPECT_EQ(wrong_count, 0) << to_string(type);
    EXPECT_LE(worst_residual, 1e-9) << to_string(type);
  }
}

TEST(InverseKinematics, SolutionsSortedAndDistinct) {
  std::mt19937_64 rng(11);
  for (auto type : kWellConnected) {
    const GeometryParams g = test::random_geometry(type, rng);
    const IkResult ik = inverse_kinematics(g, forward_kinematics(g, test::random_config(rng)));
    for (std::size_t a = 0; a < ik.solutions.size(); ++a) {
      for (std::size_t b = a + 1; b < ik.solutions.size(); ++b) {
        EXPECT_GT(angular_distance(ik.solutions[a], ik.solutions[b]), 1e-6);
      }
    }
    EXPECT_TRUE(std::is_sorted(ik.solutions.begin(), ik.solutions.end(),
                               [](const JointConfig& x, const JointConfig& y) {
                                 const JointConfig cx = x.canonical(), cy = y.canonical();
                                 return std::tie(cx.theta1, cx.theta2, cx.theta3) <
                                        std::tie(cy.theta1, cy.theta2, cy.theta3);
                               }));
  }
}

TEST(InverseKinematics, BeyondReachIsEmpty) {
  EXPECT_TRUE(inverse_kinematics(kExampleC, {2.2, 1.2, 0.5}).solutions.empty());
  EXPECT_TRUE(inverse_kinematics(kExampleC, {0.0, 0.0, 2.6}).solutions.empty());
}

// Types without r3 give the same conditioning on all four branches. With r3
// the branches split into two pairs that share a value; the spread is
// recorded rather than bounded.
TEST(InverseKinematics, ConditioningAcrossBranches) {
  std::mt19937_64 rng(12);
  for (auto type : kWellConnected) {
    double spread = 0.0, pair_gap = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const GeometryParams g = test::random_geometry(type, rng);
      const IkResult ik = inverse_kinematics(g, forward_kinematics(g, test::random_config(rng)));
      std::vector<double> ks;
      for (const auto& s : ik.solutions) ks.push_back(conditioning_index(jacobian(g, s)));
      std::sort(ks.begin(), ks.end());
      if (ks.size() != 4) continue;
      spread = std::max(spread, (ks.back() - ks.front()) / ks.back());
      pair_gap = std::max({pair_gap, (ks[1] - ks[0]) / ks.back(), (ks[3] - ks[2]) / ks.back()});
    }
    ::testing::Test::RecordProperty(std::string(to_string(type)) + "_spread", std::to_string(spread));
    EXPECT_LE(pair_gap, 1e-6) << to_string(type);
    if (type == ManipulatorType::G || type == ManipulatorType::H) {
      EXPECT_GT(spread, 1e-3) << to_string(type);
    } else {
      EXPECT_LE(spread, 1e-6) << to_string(type);
    }
  }
}

TEST(ManipulatorType, ParseAndPrint) {
  for (auto type : kWellConnected) EXPECT_EQ(parse_manipulator_type(to_string(type)), type);
  EXPECT_EQ(parse_manipulator_type("b1"), ManipulatorType::B1);
  EXPECT_EQ(parse_manipulator_type("generic"), ManipulatorType::Generic);
  EXPECT_FALSE(parse_manipulator_type("B2").has_value());
}

TEST(ManipulatorType, MembershipRulesNameTheViolation) {
  try {
    check_type(ManipulatorType::C, {0.0, 2.0, 1.5, 1.0, 0.0});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGeometry);
    EXPECT_NE(std::string(e.what()).find("d3"), std::string::npos);
  }
  EXPECT_THROW(check_type(ManipulatorType::B1, {0.0, 1.0, 2.0, 0.0, 0.0}), Error);
  EXPECT_NO_THROW(check_type(ManipulatorType::B1, {0.0, 4.0, 2.2, 0.0, 0.0}));
  EXPECT_NO_THROW(check_type(ManipulatorType::H, {0.0, 0.0, 4.0, 4.0, 1.0}));
  EXPECT_THROW(check_type(ManipulatorType::H, {0.0, 0.0, 4.0, 4.0, 0.0}), Error);
  EXPECT_THROW(Manipulator(ManipulatorType::E, {0.0, 1.0, 1.0, 0.0, 0.0}), Error);
}

TEST(GeometryParams, Validation) {
  EXPECT_THROW((GeometryParams{0.0, 0.0, 0.0, 1.0, 0.0}.validate()), Error);
  EXPECT_THROW((GeometryParams{-1.0, 0.0, 1.0, 0.0, 0.0}.validate()), Error);
  EXPECT_THROW((GeometryParams{0.0, NAN, 1.0, 0.0, 0.0}.validate()), Error);
  EXPECT_NO_THROW(kExampleC.validate());
}

TEST(WrapAngle, RangeAndIdentity) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.5), 0.5);
  EXPECT_NEAR(wrap_angle(3 * std::numbers::pi), -std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2 * std::numbers::pi, 1e-12);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> any(-100.0, 100.0);
  for (int n = 0; n < 1000; ++n) {
    const double w = wrap_angle(any(rng));
    EXPECT_GE(w, -std::numbers::pi);
    EXPECT_LT(w, std::numbers::pi);
  }
}

}  // namespace
}  // namespace rdwkit
