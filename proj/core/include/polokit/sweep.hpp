#pragma once

// Post-processing grid search over (radius scale, DoR threshold) on cached
// pre-NMS detections.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "polokit/eval.hpp"
#include "polokit/nms.hpp"

namespace polokit {

struct SweepConfig {
  std::vector<double> radius_scales;
  std::vector<double> dor_thresholds;
  bool class_aware = true;

  /// 0.25, 0.50, ..., 2.00 by 0.25 and 0.1, 0.2, ..., 1.0 by 0.1.
  [[nodiscard]] static SweepConfig defaults();
  void validate() const;
};

struct SweepCell {
  double radius_scale = 0.0;
  double dor_threshold = 0.0;
  CountReport report;
  std::size_t kept = 0;  ///< detections surviving NMS over all images
};

struct SweepResult {
  /// Scale-major: cells[s * |thresholds| + t].
  std::vector<SweepCell> cells;
  std::size_t num_scales = 0;
  std::size_t num_thresholds = 0;

  [[nodiscard]] const SweepCell& at(std::size_t scale_index, std::size_t threshold_index) const {
    return cells[scale_index * num_thresholds + threshold_index];
  }
};

/// For each grid point, applies dor_nms per image with base_radii rescaled,
/// then mae_per_class against gts. Inputs are not modified. Grid points are
/// evaluated in parallel; output order is fixed.
[[nodiscard]] SweepResult run_sweep(const ImageDetections& raw, const ImageLabels& gts, const RadiusTable& base_radii,
                                    const SweepConfig& cfg);

/// Long-format CSV: header `class,scale,threshold,mae,pred_count`.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace polokit
