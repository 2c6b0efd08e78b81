#include <gtest/gtest.h>

#include <limits>

#include "oracles.hpp"
#include "polokit/eval.hpp"
#include "polokit/synth.hpp"

namespace polokit {
namespace {

SceneConfig base_scene() {
  SceneConfig cfg;
  cfg.image = {3000, 2000};
  cfg.abundance = {200, 50, 0, 10};
  cfg.rng_seed = 21;
  return cfg;
}

TEST(Scene, CountsBoundsAndDeterminism) {
  const auto cfg = base_scene();
  const auto pts = generate_scene(cfg);
  const auto counts = count_per_class(pts);
  EXPECT_EQ(count_of(counts, ClassId(0)), 200u);
  EXPECT_EQ(count_of(counts, ClassId(1)), 50u);
  EXPECT_EQ(count_of(counts, ClassId(2)), 0u);
  EXPECT_EQ(count_of(counts, ClassId(3)), 10u);
  for (const auto& p : pts) {
    EXPECT_GE(p.point.x, 0.0);
    EXPECT_LT(p.point.x, 3000.0);
    EXPECT_GE(p.point.y, 0.0);
    EXPECT_LT(p.point.y, 2000.0);
  }
  EXPECT_EQ(generate_scene(cfg), pts);
  auto other = cfg;
  other.rng_seed = 22;
  EXPECT_NE(generate_scene(other), pts);
}

TEST(Scene, MinSeparationHolds) {
  auto cfg = base_scene();
  cfg.min_separation = 61.0;
  const auto pts = generate_scene(cfg);
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) closest = std::min(closest, oracle::dist(pts[i].point, pts[j].point));
  EXPECT_GE(closest, 61.0);
}

TEST(Scene, InfeasibleSeparationThrows) {
  SceneConfig cfg;
  cfg.image = {100, 100};
  cfg.abundance = {50};
  cfg.min_separation = 60.0;
  cfg.max_attempts_per_point = 50;
  EXPECT_THROW((void)generate_scene(cfg), ValidationError);
}

TEST(Scene, ValidatesConfig) {
  auto cfg = base_scene();
  cfg.cluster_count = 0;
  EXPECT_THROW((void)generate_scene(cfg), ValidationError);
  cfg = base_scene();
  cfg.cluster_spread = -1;
  EXPECT_THROW((void)generate_scene(cfg), ValidationError);
}

TEST(Detector, NoiselessIsExact) {
  const auto gts = generate_scene(base_scene());
  const auto dets = simulate_detector(gts, {3000, 2000}, DetectorNoise{});
  ASSERT_EQ(dets.size(), gts.size());
  for (std::size_t i = 0; i < gts.size(); ++i) {
    EXPECT_EQ(dets[i].point, gts[i].point);
    EXPECT_EQ(dets[i].class_id, gts[i].class_id);
    EXPECT_GE(dets[i].confidence, 0.6);
    EXPECT_LE(dets[i].confidence, 1.0);
  }
}

TEST(Detector, RatesAreStatisticallyRight) {
  SceneConfig cfg;
  cfg.image = {8688, 5792};
  cfg.abundance = {4000};
  cfg.rng_seed = 2;
  const auto gts = generate_scene(cfg);

  DetectorNoise miss;
  miss.miss_rate = 0.2;
  miss.rng_seed = 3;
  const auto kept = simulate_detector(gts, cfg.image, miss).size();
  EXPECT_TRUE(oracle::within_binomial(gts.size() - kept, gts.size(), 0.2));

  DetectorNoise dup;
  dup.duplicate_rate = 0.3;
  dup.rng_seed = 4;
  const auto doubled = simulate_detector(gts, cfg.image, dup).size();
  EXPECT_TRUE(oracle::within_binomial(doubled - gts.size(), gts.size(), 0.3));

  DetectorNoise fp;
  fp.false_positive_rate = 0.1;
  fp.rng_seed = 5;
  const auto with_fp = simulate_detector(gts, cfg.image, fp);
  EXPECT_EQ(with_fp.size(), gts.size() + 400u);
  for (std::size_t i = gts.size(); i < with_fp.size(); ++i) {
    EXPECT_GE(with_fp[i].confidence, 0.25);
    EXPECT_LE(with_fp[i].confidence, 0.6);
  }
}

TEST(Detector, JitterStaysInImage) {
  const std::vector<LabeledPoint> gts{{{0, 0}, ClassId(0)}, {{99.9, 99.9}, ClassId(0)}};
  DetectorNoise noise;
  noise.jitter_sigma = 50;
  noise.rng_seed = 1;
  for (int k = 0; k < 100; ++k) {
    noise.rng_seed = k;
    for (const auto& d : simulate_detector(gts, {100, 100}, noise)) {
      EXPECT_GE(d.point.x, 0.0);
      EXPECT_LE(d.point.x, 100.0);
      EXPECT_GE(d.point.y, 0.0);
      EXPECT_LE(d.point.y, 100.0);
    }
  }
}

TEST(Detector, ValidatesRates) {
  DetectorNoise noise;
  noise.miss_rate = 1.5;
  EXPECT_THROW((void)simulate_detector({}, {10, 10}, noise), ValidationError);
}

}  // namespace
}  // namespace polokit
