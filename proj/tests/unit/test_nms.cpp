#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "polokit/nms.hpp"

namespace polokit {
namespace {

const RadiusTable kRadii({{ClassId(0), 40.0}, {ClassId(1), 40.0}, {ClassId(2), 30.0}});

bool same_multiset(std::vector<Detection> a, std::vector<Detection> b) {
  auto less = [](const Detection& x, const Detection& y) {
    return std::tie(x.confidence, x.class_id, x.point.y, x.point.x) < std::tie(y.confidence, y.class_id, y.point.y, y.point.x);
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

TEST(Dor, Examples) {
  EXPECT_EQ(dor({0, 0}, {20, 0}, 40), 0.5);
  EXPECT_EQ(dor({3, 3}, {3, 3}, 40), 0.0);
  EXPECT_EQ(dor({0, 0}, {37.5, 0}, 40 * 1.25), 0.75);
  EXPECT_THROW((void)dor({0, 0}, {1, 1}, 0.0), ValidationError);
}

TEST(DorNms, ExactDuplicateSuppressed) {
  const std::vector<Detection> d{{{10, 10}, ClassId(0), 0.8}, {{10, 10}, ClassId(0), 0.9}};
  const auto kept = dor_nms(d, kRadii, {0.3, true});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].confidence, 0.9);
}

TEST(DorNms, BoundaryDorEqualToThresholdKept) {
  // distance 12, radius 40: DoR = 0.3 exactly, suppression needs DoR < 0.3.
  const std::vector<Detection> d{{{0, 0}, ClassId(0), 0.9}, {{12, 0}, ClassId(0), 0.8}};
  EXPECT_EQ(12.0 / 40.0, 0.3);
  EXPECT_EQ(dor_nms(d, kRadii, {0.3, true}).size(), 2u);
  EXPECT_EQ(dor_nms_naive(d, kRadii, {0.3, true}).size(), 2u);
  EXPECT_EQ(dor_nms(d, kRadii, {std::nextafter(0.3, 1.0), true}).size(), 1u);
}

TEST(DorNms, ZeroThresholdReturnsEverything) {
  std::mt19937_64 gen(1);
  const auto d = oracle::random_detections(gen, 300, 100, 3);
  const auto kept = dor_nms(d, kRadii, {0.0, true});
  EXPECT_TRUE(same_multiset(kept, d));
}

TEST(DorNms, ClassAwareVersusAgnostic) {
  const std::vector<Detection> d{{{0, 0}, ClassId(0), 0.9}, {{1, 0}, ClassId(1), 0.8}};
  EXPECT_EQ(dor_nms(d, kRadii, {0.6, true}).size(), 2u);
  EXPECT_EQ(dor_nms(d, kRadii, {0.6, false}).size(), 1u);
}

TEST(DorNms, KeptRadiusDecidesInAgnosticMode) {
  // Kept gull (r 30) at distance 15 from an "other" (r 40): DoR 0.5 with 30 vs 0.375 with 40.
  const std::vector<Detection> d{{{0, 0}, ClassId(2), 0.9}, {{15, 0}, ClassId(0), 0.8}};
  EXPECT_EQ(dor_nms(d, kRadii, {0.45, false}).size(), 2u);
  const std::vector<Detection> flipped{{{0, 0}, ClassId(2), 0.8}, {{15, 0}, ClassId(0), 0.9}};
  EXPECT_EQ(dor_nms(flipped, kRadii, {0.45, false}).size(), 1u);
}

TEST(DorNms, UnknownClassErrors) {
  const std::vector<Detection> d{{{0, 0}, ClassId(9), 0.9}};
  EXPECT_THROW((void)dor_nms(d, kRadii, {}), ValidationError);
  EXPECT_THROW((void)dor_nms(d, kRadii, {-0.1, true}), ValidationError);
}

TEST(DorNms, OutputInConfidenceOrder) {
  const std::vector<Detection> d{{{0, 0}, ClassId(0), 0.3}, {{500, 0}, ClassId(0), 0.9}, {{900, 0}, ClassId(1), 0.6}};
  const auto kept = dor_nms(d, kRadii, {});
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0].confidence, 0.9);
  EXPECT_EQ(kept[2].confidence, 0.3);
}

TEST(DorNms, MatchesOracleAndProperties) {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> size(0, 300);
  std::uniform_real_distribution<double> tau(0.0, 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    const bool aware = trial % 3 != 0;
    const auto d = oracle::random_detections(gen, size(gen), 400, 3);
    const double t = tau(gen);
    const NmsConfig cfg{t, aware};
    const auto kept = dor_nms(d, kRadii, cfg);
    const auto expected = oracle::nms(d, [](ClassId c) { return kRadii.radius(c); }, t, aware);
    ASSERT_EQ(kept, expected);
    ASSERT_EQ(dor_nms_naive(d, kRadii, cfg), expected);
    EXPECT_EQ(dor_nms(kept, kRadii, cfg), kept);

    auto shuffled = d;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_EQ(dor_nms(shuffled, kRadii, cfg), kept);

    EXPECT_GE(kept.size(), dor_nms(d, kRadii, {t + 0.2, aware}).size());
    if (!d.empty()) {
      const auto best = *std::min_element(d.begin(), d.end(), nms_order_less);
      EXPECT_EQ(kept.front(), best);
    }
  }
}

TEST(DorNms, RadiusThresholdDuality) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::random_detections(gen, 200, 300, 3);
    for (double k : {0.5, 2.0, 4.0}) {
      const auto base = dor_nms(d, kRadii, {0.6, true});
      const auto scaled = dor_nms(d, kRadii.with_scale(k), {0.6 / k, true});
      EXPECT_EQ(base, scaled) << "k=" << k;
    }
  }
}

TEST(DorNms, HighDensityHashAgreesWithNaive) {
  std::mt19937_64 gen(8);
  const auto d = oracle::random_detections(gen, 3000, 200, 2);
  const NmsConfig cfg{0.6, true};
  EXPECT_EQ(dor_nms(d, kRadii, cfg), dor_nms_naive(d, kRadii, cfg));
  const NmsConfig agnostic{0.9, false};
  EXPECT_EQ(dor_nms(d, kRadii, agnostic), dor_nms_naive(d, kRadii, agnostic));
}

}  // namespace
}  // namespace polokit
