#include "polokit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

#include "polokit/nms.hpp"
#include "spatial_grid.hpp"

namespace polokit {

ClassCounts count_per_class(const std::vector<Detection>& dets) {
  ClassCounts out;
  for (const auto& d : dets) ++out[d.class_id];
  return out;
}

ClassCounts count_per_class(const std::vector<LabeledPoint>& labels) {
  ClassCounts out;
  for (const auto& l : labels) ++out[l.class_id];
  return out;
}

std::size_t count_of(const ClassCounts& counts, ClassId c) {
  auto it = counts.find(c);
  return it == counts.end() ? 0 : it->second;
}

CountReport mae_per_class(const ImageDetections& preds, const ImageLabels& gts, const std::set<ClassId>& extra_classes) {
  std::map<std::string, std::pair<ClassCounts, ClassCounts>> per_image;
  std::set<ClassId> classes = extra_classes;
  for (const auto& [image, dets] : preds) {
    per_image[image].first = count_per_class(dets);
    for (const auto& [c, n] : per_image[image].first) classes.insert(c);
  }
  for (const auto& [image, labels] : gts) {
    per_image[image].second = count_per_class(labels);
    for (const auto& [c, n] : per_image[image].second) classes.insert(c);
  }

  CountReport report;
  report.num_images = per_image.size();
  for (ClassId c : classes) {
    ClassCountStats s;
    double abs_error_sum = 0.0;
    for (const auto& [image, counts] : per_image) {
      const std::size_t p = count_of(counts.first, c);
      const std::size_t g = count_of(counts.second, c);
      s.predicted_total += p;
      s.ground_truth_total += g;
      abs_error_sum += static_cast<double>(p > g ? p - g : g - p);
    }
    s.mae = report.num_images == 0 ? 0.0 : abs_error_sum / static_cast<double>(report.num_images);
    report.classes[c] = s;
  }
  return report;
}

MatchResult match_detections(const std::vector<Detection>& dets, const std::vector<LabeledPoint>& gts,
                             const RadiusTable& radii, double dor_threshold) {
  if (!(dor_threshold >= 0.0) || !std::isfinite(dor_threshold)) {
    throw ValidationError("matching DoR threshold must be finite and >= 0");
  }
  struct Candidate {
    double dor;
    std::size_t det;
    std::size_t gt;
  };
  std::vector<Candidate> candidates;
  if (!dets.empty() && !gts.empty()) {
    double max_r = 0.0;
    for (const auto& g : gts) max_r = std::max(max_r, radii.radius(g.class_id));
    detail::SpatialGrid grid(max_r * dor_threshold);
    for (std::size_t g = 0; g < gts.size(); ++g) grid.insert(gts[g].point, gts[g].class_id.value, g);
    for (std::size_t d = 0; d < dets.size(); ++d) {
      grid.for_each_near(dets[d].point, dets[d].class_id.value, [&](std::size_t g) {
        const double v = dor(dets[d].point, gts[g].point, radii.radius(gts[g].class_id));
        if (v <= dor_threshold) candidates.push_back({v, d, g});
      });
    }
  }
  // Order on values, never on indices, so the outcome is permutation invariant.
  auto key = [&](const Candidate& c) {
    const auto& d = dets[c.det];
    const auto& g = gts[c.gt];
    return std::make_tuple(c.dor, g.class_id, g.point.y, g.point.x, -d.confidence, d.point.y, d.point.x);
  };
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) { return key(a) < key(b); });

  MatchResult out;
  std::vector<bool> det_used(dets.size(), false);
  std::vector<bool> gt_used(gts.size(), false);
  for (const auto& c : candidates) {
    if (det_used[c.det] || gt_used[c.gt]) continue;
    det_used[c.det] = true;
    gt_used[c.gt] = true;
    out.pairs.push_back({c.det, c.gt, c.dor});
  }
  out.true_positives = out.pairs.size();
  out.false_positives = dets.size() - out.true_positives;
  out.false_negatives = gts.size() - out.true_positives;
  return out;
}

}  // namespace polokit
