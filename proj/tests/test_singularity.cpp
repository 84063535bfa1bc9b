#include "rdwkit/error.hpp"
#include "rdwkit/singularity.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace rdwkit {
namespace {

using test::kExampleC;

class ExampleSingularSet : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { samples_ = new SingularSampleSet(singular_set(kExampleC)); }
  static void TearDownTestSuite() { delete samples_; }
  static SingularSampleSet* samples_;
};
SingularSampleSet* ExampleSingularSet::samples_ = nullptr;

TEST_F(ExampleSingularSet, EverySampleIsSingular) {
  const double tol = singular_tolerance(kExampleC);
  for (const auto& pre : samples_->preimages) {
    EXPECT_LE(std::abs(det_jacobian(kExampleC, {0.0, pre[0], pre[1]})), tol);
  }
}

TEST_F(ExampleSingularSet, SamplesLieOnFoldedCircle) {
  for (const auto& p : samples_->points) {
    const double direct = std::abs(std::hypot(p.rho - kExampleC.r2, p.z) - kExampleC.d4);
    const double folded = std::abs(std::hypot(p.rho + kExampleC.r2, p.z) - kExampleC.d4);
    EXPECT_LE(std::min(direct, folded), 1e-7);
  }
}

TEST_F(ExampleSingularSet, CoversTheCircleWithinGap) {
  EXPECT_LE(samples_->max_gap, samples_->spacing * (1 + 1e-12));
  EXPECT_NEAR(samples_->spacing, 2.5 / 500, 1e-9);
  for (int k = 0; k < 2000; ++k) {
    const double t = 2 * std::numbers::pi * k / 2000;
    const CrossSectionPoint c{std::abs(kExampleC.r2 + kExampleC.d4 * std::cos(t)),
                              kExampleC.d4 * std::sin(t)};
    double best = 1e9;
    for (const auto& p : samples_->points) best = std::min(best, std::hypot(p.rho - c.rho, p.z - c.z));
    EXPECT_LE(best, samples_->max_gap) << "t=" << t;
  }
}

TEST_F(ExampleSingularSet, MirrorSymmetricInZ) {
  for (std::size_t k = 0; k < samples_->size(); k += 7) {
    const auto& p = samples_->points[k];
    double best = 1e9;
    for (const auto& q : samples_->points) best = std::min(best, std::hypot(p.rho - q.rho, p.z + q.z));
    EXPECT_LE(best, samples_->max_gap);
  }
}

TEST_F(ExampleSingularSet, SortedByRhoThenZ) {
  EXPECT_TRUE(std::is_sorted(samples_->points.begin(), samples_->points.end(),
                             [](const CrossSectionPoint& a, const CrossSectionPoint& b) {
                               return std::tie(a.rho, a.z) < std::tie(b.rho, b.z);
                             }));
}

TEST_F(ExampleSingularSet, AxisCrossings) {
  const auto crossings = axis_crossings(*samples_);
  ASSERT_EQ(crossings.size(), 2u);
  EXPECT_NEAR(crossings[0], 0.5, 0.01);
  EXPECT_NEAR(crossings[1], 2.5, 0.01);
}

TEST(AxisCrossings, TypeB1FoldedAndStretched) {
  const GeometryParams g{0.0, 4.0, 2.2, 0.0, 0.0};
  const auto crossings = axis_crossings(singular_set(g, 512));
  auto near = [&](double v) {
    return std::any_of(crossings.begin(), crossings.end(), [&](double c) { return std::abs(c - v) < 0.01; });
  };
  EXPECT_TRUE(near(1.8));
  EXPECT_TRUE(near(6.2));
}

TEST(AxisCrossings, EmptyBandThrows) {
  SingularSampleSet s;
  s.points = {{1.0, 0.5}};
  s.preimages = {{0.0, 0.0}};
  s.max_gap = 0.01;
  EXPECT_THROW(axis_crossings(s), Error);
}

TEST(SingularSet, GridDoublingMovesCrossingsLessThanSpacing) {
  const GeometryParams g{0.0, 3.0, 2.0, 0.0, 1.0};
  const SingularSampleSet coarse = singular_set(g, 256), fine = singular_set(g, 512);
  const auto a = axis_crossings(coarse), b = axis_crossings(fine);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LE(std::abs(a[k] - b[k]), coarse.spacing);
}

TEST(SingularSet, RejectsTinyGrid) { EXPECT_THROW(singular_set(kExampleC, 32), Error); }

TEST(MaxReach, ClosedForms) {
  EXPECT_NEAR(max_reach(kExampleC), 2.5, 2.5e-6);
  EXPECT_NEAR(max_reach({0.0, 4.0, 2.2, 0.0, 0.0}), 6.2, 6.2e-6);
  EXPECT_NEAR(max_reach({0.0, 0.0, 4.0, 4.0, 1.0}), std::sqrt(65.0), 8.1e-6);
}

TEST(MaxReach, ScalesLinearly) {
  const GeometryParams g{1.0, 2.0, 1.5, 0.5, 0.7};
  EXPECT_NEAR(max_reach(g.scaled(7.0)), 7.0 * max_reach(g), 1e-9 * 7.0 * max_reach(g));
}

TEST(MaxReach, MatchesDenseScan) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> length(0.2, 3.0);
  for (int n = 0; n < 3; ++n) {
    const GeometryParams g{length(rng), length(rng), length(rng), length(rng), length(rng)};
    double dense = 0.0;
    constexpr int kN = 1500;
    for (int i = 0; i < kN; ++i) {
      for (int j = 0; j < kN; ++j) {
        const CartesianPoint p = forward_kinematics(
            g, {0.0, -std::numbers::pi + 2 * std::numbers::pi * i / kN,
                -std::numbers::pi + 2 * std::numbers::pi * j / kN});
        dense = std::max(dense, std::hypot(p.x, p.y, p.z));
      }
    }
    const double reach = max_reach(g);
    EXPECT_GE(reach, dense - 1e-12);
    EXPECT_LE(reach - dense, 1e-4 * g.scale());
  }
}

}  // namespace
}  // namespace rdwkit
