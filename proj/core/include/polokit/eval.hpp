#pragma once

// Counting evaluation: per-class totals and mean absolute count error over
// images, plus greedy DoR matching for true/false-positive diagnostics.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polokit/core.hpp"

namespace polokit {

using ClassCounts = std::map<ClassId, std::size_t>;

[[nodiscard]] ClassCounts count_per_class(const std::vector<Detection>& dets);
[[nodiscard]] ClassCounts count_per_class(const std::vector<LabeledPoint>& labels);

/// Zero when the class is absent.
[[nodiscard]] std::size_t count_of(const ClassCounts& counts, ClassId c);

struct ClassCountStats {
  std::size_t predicted_total = 0;
  std::size_t ground_truth_total = 0;
  double mae = 0.0;

  friend bool operator==(const ClassCountStats&, const ClassCountStats&) = default;
};

struct CountReport {
  std::size_t num_images = 0;
  std::map<ClassId, ClassCountStats> classes;

  friend bool operator==(const CountReport&, const CountReport&) = default;
};

using ImageDetections = std::map<std::string, std::vector<Detection>>;
using ImageLabels = std::map<std::string, std::vector<LabeledPoint>>;

/// MAE_c = mean over the union of image ids of |pred_c - gt_c|; an image
/// missing on one side counts zero there. The report covers every class seen
/// on either side plus `extra_classes`.
[[nodiscard]] CountReport mae_per_class(const ImageDetections& preds, const ImageLabels& gts,
                                        const std::set<ClassId>& extra_classes = {});

struct MatchedPair {
  std::size_t detection_index = 0;
  std::size_t gt_index = 0;
  double dor = 0.0;
};

struct MatchResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<MatchedPair> pairs;
};

/// Greedy one-to-one matching of same-class detection/ground-truth pairs by
/// ascending DoR (radius of the ground truth's class); pairs with
/// DoR <= dor_threshold become true positives. Ties are broken on point
/// values, so counts do not depend on input order.
[[nodiscard]] MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<LabeledPoint>& gts,
                                           const RadiusTable& radii, double dor_threshold);

}  // namespace polokit
