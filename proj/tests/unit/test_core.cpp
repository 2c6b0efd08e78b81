#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "polokit/core.hpp"

namespace polokit {
namespace {

TEST(EuclideanDistance, Examples) {
  EXPECT_EQ(euclidean_distance({0, 0}, {0, 0}), 0.0);
  EXPECT_EQ(euclidean_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_EQ(euclidean_distance({-1, 2}, {2, -2}), 5.0);
}

TEST(EuclideanDistance, MetricProperties) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int i = 0; i < 2000; ++i) {
    const Point2D a{u(gen), u(gen)}, b{u(gen), u(gen)}, c{u(gen), u(gen)}, t{u(gen), u(gen)};
    EXPECT_EQ(euclidean_distance(a, b), euclidean_distance(b, a));
    EXPECT_LE(euclidean_distance(a, c), euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);
    EXPECT_NEAR(euclidean_distance(a + t, b + t), euclidean_distance(a, b), 1e-9 * (1 + euclidean_distance(a, b)));
    EXPECT_GE(euclidean_distance(a, b), 0.0);
  }
}

TEST(RadiusTable, LookupAndScale) {
  RadiusTable t({{ClassId(0), 40.0}, {ClassId(2), 30.0}}, 1.25);
  EXPECT_EQ(t.base_radius(ClassId(2)), 30.0);
  EXPECT_EQ(t.radius(ClassId(0)), 50.0);
  EXPECT_EQ(t.max_radius(), 50.0);
  EXPECT_EQ(t.with_scale(2.0).radius(ClassId(2)), 60.0);
  EXPECT_EQ(t.with_radii_multiplied(0.5).radius(ClassId(0)), 25.0);
  EXPECT_THROW((void)t.radius(ClassId(1)), ValidationError);
}

TEST(RadiusTable, RejectsNonPositive) {
  EXPECT_THROW(RadiusTable({{ClassId(0), 0.0}}), ValidationError);
  EXPECT_THROW(RadiusTable({{ClassId(0), 10.0}}, 0.0), ValidationError);
  RadiusTable t;
  EXPECT_THROW(t.set(ClassId(0), -1.0), ValidationError);
}

TEST(Validate, Detection) {
  EXPECT_NO_THROW(validate(Detection{{1, 2}, ClassId(0), 1.0}));
  EXPECT_NO_THROW(validate(Detection{{1, 2}, ClassId(0), 0.0}));
  EXPECT_THROW(validate(Detection{{1, 2}, ClassId(0), 1.5}), ValidationError);
  EXPECT_THROW(validate(Detection{{std::nan(""), 2}, ClassId(0), 0.5}), ValidationError);
  EXPECT_THROW(validate(Detection{{std::numeric_limits<double>::infinity(), 2}, ClassId(0), 0.5}), ValidationError);
}

}  // namespace
}  // namespace polokit
