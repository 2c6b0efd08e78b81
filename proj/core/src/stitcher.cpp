#include "polokit/stitcher.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace polokit {

MergeResult merge_patch_detections(const std::map<int, std::vector<Detection>>& per_patch,
                                   const std::vector<PatchWindow>& windows) {
  std::unordered_map<int, const PatchWindow*> by_id;
  double width = 0.0;
  double height = 0.0;
  for (const auto& w : windows) {
    by_id[w.patch_id] = &w;
    width = std::max(width, static_cast<double>(w.origin_x + w.width));
    height = std::max(height, static_cast<double>(w.origin_y + w.height));
  }

  MergeResult out;
  for (const auto& [patch_id, dets] : per_patch) {
    auto it = by_id.find(patch_id);
    if (it == by_id.end()) throw ValidationError("detections reference unknown patch " + std::to_string(patch_id));
    for (const auto& d : dets) {
      validate(d);
      Detection m = d;
      m.point = patch_to_image(d.point, *it->second);
      const Point2D clamped{std::clamp(m.point.x, 0.0, width), std::clamp(m.point.y, 0.0, height)};
      if (clamped != m.point) {
        m.point = clamped;
        out.clamped.push_back(out.detections.size());
      }
      out.detections.push_back(m);
    }
  }
  return out;
}

std::vector<Detection> deduplicate(std::vector<Detection> merged, const RadiusTable& radii, const NmsConfig& cfg) {
  return dor_nms(std::move(merged), radii, cfg);
}

std::vector<Detection> stitch(const std::map<int, std::vector<Detection>>& per_patch,
                              const std::vector<PatchWindow>& windows, const RadiusTable& radii,
                              const NmsConfig& cfg) {
  return deduplicate(merge_patch_detections(per_patch, windows).detections, radii, cfg);
}

}  // namespace polokit
