#pragma once

#include <map>
#include <vector>

#include "polokit/core.hpp"
#include "polokit/nms.hpp"
#include "polokit/tiler.hpp"

namespace polokit {

struct MergeResult {
  /// Image-frame detections in (patch_id, per-patch order).
  std::vector<Detection> detections;
  /// Indices into `detections` whose point was clamped into the image.
  std::vector<std::size_t> clamped;
};

/// Translates every patch detection by its window origin. The image extent
/// is the union of the windows; points outside it are clamped onto the
/// border and reported. Throws ValidationError for a patch id with no window.
[[nodiscard]] MergeResult merge_patch_detections(const std::map<int, std::vector<Detection>>& per_patch,
                                                 const std::vector<PatchWindow>& windows);

/// Second suppression round on the image-frame set (dor_nms).
[[nodiscard]] std::vector<Detection> deduplicate(std::vector<Detection> merged, const RadiusTable& radii,
                                                 const NmsConfig& cfg);

/// merge_patch_detections followed by deduplicate.
[[nodiscard]] std::vector<Detection> stitch(const std::map<int, std::vector<Detection>>& per_patch,
                                            const std::vector<PatchWindow>& windows, const RadiusTable& radii,
                                            const NmsConfig& cfg);

}  // namespace polokit
