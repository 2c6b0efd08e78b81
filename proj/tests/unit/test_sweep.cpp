#include <gtest/gtest.h>

#include <sstream>

#include "polokit/io.hpp"
#include "polokit/nms.hpp"
#include "polokit/parallel.hpp"
#include "polokit/rng.hpp"
#include "polokit/sweep.hpp"
#include "polokit/synth.hpp"

namespace polokit {
namespace {

const RadiusTable kBase({{ClassId(0), 40.0}, {ClassId(1), 30.0}});

struct Fixture {
  ImageDetections raw;
  ImageLabels gts;
};

Fixture make_fixture(std::uint64_t seed, int images) {
  Fixture f;
  for (int i = 0; i < images; ++i) {
    SceneConfig scene;
    scene.image = {2000, 1500};
    scene.abundance = {60, 30};
    scene.min_separation = 80.0;
    scene.rng_seed = derive_seed(seed, 2 * i);
    DetectorNoise noise;
    noise.jitter_sigma = 1.0;
    noise.duplicate_rate = 0.3;
    noise.rng_seed = derive_seed(seed, 2 * i + 1);
    const std::string id = "s" + std::to_string(i);
    f.gts[id] = generate_scene(scene);
    f.raw[id] = simulate_detector(f.gts[id], scene.image, noise);
  }
  return f;
}

TEST(SweepConfig, Defaults) {
  const auto cfg = SweepConfig::defaults();
  ASSERT_EQ(cfg.radius_scales.size(), 8u);
  ASSERT_EQ(cfg.dor_thresholds.size(), 10u);
  EXPECT_EQ(cfg.radius_scales.front(), 0.25);
  EXPECT_EQ(cfg.radius_scales.back(), 2.0);
  EXPECT_DOUBLE_EQ(cfg.dor_thresholds.front(), 0.1);
  EXPECT_DOUBLE_EQ(cfg.dor_thresholds.back(), 1.0);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_THROW((SweepConfig{{}, {0.5}, true}.validate()), ValidationError);
  EXPECT_THROW((SweepConfig{{1.0}, {-0.5}, true}.validate()), ValidationError);
  EXPECT_THROW((SweepConfig{{0.0}, {0.5}, true}.validate()), ValidationError);
}

TEST(Sweep, CellsMatchDirectEvaluation) {
  const auto f = make_fixture(4, 3);
  const SweepConfig cfg{{0.5, 1.25}, {0.0, 0.3, 0.6}, true};
  const auto result = run_sweep(f.raw, f.gts, kBase, cfg);
  ASSERT_EQ(result.cells.size(), 6u);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t t = 0; t < 3; ++t) {
      const auto& cell = result.at(s, t);
      EXPECT_EQ(cell.radius_scale, cfg.radius_scales[s]);
      EXPECT_EQ(cell.dor_threshold, cfg.dor_thresholds[t]);
      ImageDetections kept;
      std::size_t n = 0;
      for (const auto& [id, d] : f.raw) {
        kept[id] = dor_nms(d, kBase.with_scale(cfg.radius_scales[s]), {cfg.dor_thresholds[t], true});
        n += kept[id].size();
      }
      EXPECT_EQ(cell.report, mae_per_class(kept, f.gts));
      EXPECT_EQ(cell.kept, n);
    }
  }
}

TEST(Sweep, SuppressionReducesDuplicateError) {
  const auto f = make_fixture(9, 4);
  const auto result = run_sweep(f.raw, f.gts, kBase, {{1.25}, {0.0, 0.6}, true});
  for (const auto& [c, s] : result.at(0, 0).report.classes) {
    EXPECT_GT(s.mae, result.at(0, 1).report.classes.at(c).mae) << c.value;
  }
}

TEST(Sweep, CsvDeterministicAcrossThreadCounts) {
  const auto f = make_fixture(11, 2);
  const auto cfg = SweepConfig::defaults();
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(f.raw, f.gts, kBase, cfg));
  write_sweep_csv(b, run_sweep(f.raw, f.gts, kBase, cfg));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("class,scale,threshold,mae,pred_count\n", 0), 0u);

  std::istringstream in(a.str());
  const auto rows = read_sweep_csv(in);
  EXPECT_EQ(rows.size(), 2u * 8u * 10u);
  EXPECT_EQ(rows.front().class_id, ClassId(0));
  EXPECT_EQ(rows.back().class_id, ClassId(1));
}

TEST(Sweep, DoesNotModifyInputs) {
  const auto f = make_fixture(13, 2);
  const auto copy = f.raw;
  (void)run_sweep(f.raw, f.gts, kBase, {{1.0}, {0.6}, true});
  EXPECT_EQ(f.raw, copy);
}

}  // namespace
}  // namespace polokit
