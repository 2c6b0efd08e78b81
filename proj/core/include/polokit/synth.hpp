#pragma once

// Synthetic scenes of point-annotated flocks and a noisy stand-in detector,
// used as ground truth for end-to-end checks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "polokit/core.hpp"

namespace polokit {

struct SceneConfig {
  ImageSize image{8688, 5792};
  /// Points per class; index is the class id.
  std::vector<std::size_t> abundance;
  std::size_t cluster_count = 8;
  double cluster_spread = 400.0;  ///< Gaussian sigma around a cluster centre, pixels
  std::optional<double> min_separation;
  std::uint64_t rng_seed = 0;
  /// Rejection attempts allowed per point before the scene is declared infeasible.
  std::size_t max_attempts_per_point = 2000;

  void validate() const;
};

struct DetectorNoise {
  double jitter_sigma = 0.0;
  double miss_rate = 0.0;
  double duplicate_rate = 0.0;
  double false_positive_rate = 0.0;
  double tp_confidence_min = 0.6;
  double tp_confidence_max = 1.0;
  double fp_confidence_min = 0.25;
  double fp_confidence_max = 0.6;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Cluster centres uniform over the image; each point picks a cluster
/// uniformly and is drawn from an isotropic Gaussian around it, rejected if it
/// leaves the image or violates min_separation against any earlier point.
/// Classes are generated in id order. Throws ValidationError when the
/// rejection budget runs out.
[[nodiscard]] std::vector<LabeledPoint> generate_scene(const SceneConfig& cfg);

/// Each ground truth is missed with miss_rate; survivors are jittered and
/// duplicated (fresh jitter) with duplicate_rate; then
/// round(false_positive_rate * |gts|) false positives are placed uniformly
/// with a class drawn from those present. Jittered points are clamped into
/// the image.
[[nodiscard]] std::vector<Detection> simulate_detector(const std::vector<LabeledPoint>& gts, ImageSize image,
                                                       const DetectorNoise& noise);

}  // namespace polokit
