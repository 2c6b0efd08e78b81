#include "polokit/tiler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polokit/rng.hpp"

namespace polokit {

int TilingConfig::stride() const {
  return static_cast<int>(std::lround(static_cast<double>(patch_size) * (1.0 - overlap_fraction)));
}

void TilingConfig::validate() const {
  if (patch_size <= 0) throw ValidationError("patch_size must be positive");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ValidationError("overlap_fraction must lie in [0,1)");
  }
  if (stride() < 1) throw ValidationError("patch stride rounds to zero; reduce overlap_fraction");
  if (!(min_box_area_fraction >= 0.0 && min_box_area_fraction <= 1.0)) {
    throw ValidationError("min_box_area_fraction must lie in [0,1]");
  }
  if (!(negative_keep_fraction >= 0.0 && negative_keep_fraction <= 1.0)) {
    throw ValidationError("negative_keep_fraction must lie in [0,1]");
  }
}

std::vector<int> axis_origins(int extent, int patch_size, int stride) {
  if (extent <= patch_size) return {0};
  std::vector<int> origins;
  int pos = 0;
  for (; pos + patch_size < extent; pos += stride) origins.push_back(pos);
  origins.push_back(extent - patch_size);
  return origins;
}

std::vector<PatchWindow> plan_patches(ImageSize image, const TilingConfig& cfg) {
  if (image.width <= 0 || image.height <= 0) throw ValidationError("image dimensions must be positive");
  cfg.validate();
  const int stride = cfg.stride();
  const auto xs = axis_origins(image.width, cfg.patch_size, stride);
  const auto ys = axis_origins(image.height, cfg.patch_size, stride);
  const int w = std::min(cfg.patch_size, image.width);
  const int h = std::min(cfg.patch_size, image.height);
  const bool undersized = w < cfg.patch_size || h < cfg.patch_size;

  std::vector<PatchWindow> windows;
  windows.reserve(xs.size() * ys.size());
  int id = 0;
  for (int y : ys) {
    for (int x : xs) windows.push_back({x, y, w, h, id++, undersized});
  }
  return windows;
}

bool contains(const PatchWindow& w, Point2D p) {
  return p.x >= w.origin_x && p.x < w.origin_x + w.width && p.y >= w.origin_y && p.y < w.origin_y + w.height;
}

PatchAssignment assign_points_to_patches(const std::vector<LabeledPoint>& labels,
                                         const std::vector<PatchWindow>& windows) {
  PatchAssignment out;
  for (const auto& w : windows) out.labels[w.patch_id];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require_finite(labels[i].point, "label");
    bool placed = false;
    for (const auto& w : windows) {
      if (!contains(w, labels[i].point)) continue;
      out.labels[w.patch_id].push_back({point_to_patch(labels[i].point, w), labels[i].class_id});
      placed = true;
    }
    if (!placed) out.outside.push_back(i);
  }
  return out;
}

Box box_from_point(const LabeledPoint& p, const RadiusTable& radii, std::optional<ImageSize> image) {
  require_finite(p.point, "label");
  const double r = radii.radius(p.class_id);
  Box b{p.class_id, p.point.x - r, p.point.y - r, p.point.x + r, p.point.y + r};
  if (image) {
    b.x_min = std::max(b.x_min, 0.0);
    b.y_min = std::max(b.y_min, 0.0);
    b.x_max = std::min(b.x_max, static_cast<double>(image->width));
    b.y_max = std::min(b.y_max, static_cast<double>(image->height));
    if (!(b.x_min < b.x_max && b.y_min < b.y_max)) {
      throw ValidationError("pseudo-box lies outside the image");
    }
  }
  return b;
}

std::optional<Box> clip_box_to_patch(const Box& b, const PatchWindow& w, double min_area_fraction) {
  const double x0 = std::max(b.x_min, static_cast<double>(w.origin_x));
  const double y0 = std::max(b.y_min, static_cast<double>(w.origin_y));
  const double x1 = std::min(b.x_max, static_cast<double>(w.origin_x + w.width));
  const double y1 = std::min(b.y_max, static_cast<double>(w.origin_y + w.height));
  if (!(x0 < x1 && y0 < y1)) return std::nullopt;
  const double ratio = ((x1 - x0) * (y1 - y0)) / b.area();
  if (ratio < min_area_fraction) return std::nullopt;
  return Box{b.class_id, x0 - w.origin_x, y0 - w.origin_y, x1 - w.origin_x, y1 - w.origin_y};
}

std::set<int> filter_negative_patches(const std::map<int, std::vector<LabeledPoint>>& patch_labels,
                                      double keep_fraction, std::uint64_t seed) {
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) throw ValidationError("keep_fraction must lie in [0,1]");
  std::set<int> kept;
  std::vector<int> empty;
  for (const auto& [id, labels] : patch_labels) {
    if (labels.empty()) {
      empty.push_back(id);
    } else {
      kept.insert(id);
    }
  }
  const auto keep = static_cast<std::size_t>(std::floor(keep_fraction * static_cast<double>(empty.size()) + 0.5));
  Rng rng(seed);
  rng.shuffle(std::span<int>(empty));
  kept.insert(empty.begin(), empty.begin() + static_cast<std::ptrdiff_t>(std::min(keep, empty.size())));
  return kept;
}

}  // namespace polokit
