#include <benchmark/benchmark.h>

#include <random>

#include "polokit/decode.hpp"
#include "polokit/nms.hpp"
#include "polokit/sweep.hpp"
#include "polokit/synth.hpp"

namespace {

using namespace polokit;

const RadiusTable kRadii({{ClassId(0), 40.0}, {ClassId(1), 40.0}, {ClassId(2), 30.0}}, 1.25);

std::vector<Detection> random_detections(std::size_t n, double extent) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> coord(0, extent), conf(0, 1);
  std::vector<Detection> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {{coord(gen), coord(gen)}, ClassId(static_cast<std::uint32_t>(i % 3)), conf(gen)};
  return out;
}

void BM_DorNms(benchmark::State& state) {
  const auto d = random_detections(static_cast<std::size_t>(state.range(0)), 8688);
  for (auto _ : state) benchmark::DoNotOptimize(dor_nms(d, kRadii, {0.6, true}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DorNms)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_DorNmsNaive(benchmark::State& state) {
  const auto d = random_detections(static_cast<std::size_t>(state.range(0)), 8688);
  for (auto _ : state) benchmark::DoNotOptimize(dor_nms_naive(d, kRadii, {0.6, true}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DorNmsNaive)->RangeMultiplier(10)->Range(1000, 10000)->Unit(benchmark::kMillisecond);

void BM_DecodeGrid(benchmark::State& state) {
  ActivationGrid acts;
  acts.grid = {80, 80, 8};
  acts.num_classes = 5;
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n(0, 2);
  acts.channels.resize(acts.grid.cell_count() * acts.channels_per_cell());
  for (auto& v : acts.channels) v = n(gen);
  for (auto _ : state) benchmark::DoNotOptimize(decode_grid(acts, 0.25));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(acts.grid.cell_count()));
}
BENCHMARK(BM_DecodeGrid);

void BM_Sweep(benchmark::State& state) {
  ImageDetections raw;
  ImageLabels gts;
  for (int i = 0; i < 4; ++i) {
    SceneConfig scene;
    scene.abundance = {1500, 500, 200};
    scene.rng_seed = static_cast<std::uint64_t>(i);
    DetectorNoise noise;
    noise.jitter_sigma = 2;
    noise.duplicate_rate = 0.3;
    noise.false_positive_rate = 0.05;
    noise.rng_seed = 100 + static_cast<std::uint64_t>(i);
    const std::string id = "s" + std::to_string(i);
    gts[id] = generate_scene(scene);
    raw[id] = simulate_detector(gts[id], scene.image, noise);
  }
  const auto cfg = SweepConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(raw, gts, kRadii, cfg));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
