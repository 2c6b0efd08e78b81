#pragma once

// Sliding-window tiling of large images into fixed-size patches, label
// frame transforms, the box clipping rule and negative-patch subsampling.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "polokit/core.hpp"

namespace polokit {

struct PatchWindow {
  int origin_x = 0;
  int origin_y = 0;
  int width = 0;
  int height = 0;
  int patch_id = 0;
  /// Set when the image is smaller than the patch size along some axis and
  /// the window was shrunk to the image extent.
  bool undersized = false;

  friend bool operator==(const PatchWindow&, const PatchWindow&) = default;
};

struct Box {
  ClassId class_id;
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  [[nodiscard]] double area() const { return (x_max - x_min) * (y_max - y_min); }
  friend bool operator==(const Box&, const Box&) = default;
};

struct TilingConfig {
  int patch_size = 640;
  double overlap_fraction = 0.10;
  double min_box_area_fraction = 0.15;
  double negative_keep_fraction = 0.05;
  std::uint64_t rng_seed = 0;

  /// round(patch_size * (1 - overlap_fraction)).
  [[nodiscard]] int stride() const;
  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

/// Window origins along one axis: multiples of `stride` followed by a final
/// origin clamped flush to the border. A single origin 0 when extent <= patch.
[[nodiscard]] std::vector<int> axis_origins(int extent, int patch_size, int stride);

/// Row-major windows with sequential patch ids starting at 0.
[[nodiscard]] std::vector<PatchWindow> plan_patches(ImageSize image, const TilingConfig& cfg);

/// Half-open containment: origin <= coord < origin + size on both axes.
[[nodiscard]] bool contains(const PatchWindow& w, Point2D p);

[[nodiscard]] inline Point2D point_to_patch(Point2D p, const PatchWindow& w) {
  return {p.x - w.origin_x, p.y - w.origin_y};
}
[[nodiscard]] inline Point2D patch_to_image(Point2D p, const PatchWindow& w) {
  return {p.x + w.origin_x, p.y + w.origin_y};
}

struct PatchAssignment {
  /// Every window's patch_id is present, possibly with an empty list.
  std::map<int, std::vector<LabeledPoint>> labels;
  /// Indices of input labels contained in no window (outside the image).
  std::vector<std::size_t> outside;
};

[[nodiscard]] PatchAssignment assign_points_to_patches(const std::vector<LabeledPoint>& labels,
                                                       const std::vector<PatchWindow>& windows);

/// Square pseudo-box of side 2 * radius(class) centred at the point,
/// optionally clipped to the image. Throws for an unknown class or when
/// clipping leaves an empty box.
[[nodiscard]] Box box_from_point(const LabeledPoint& p, const RadiusTable& radii,
                                 std::optional<ImageSize> image = std::nullopt);

/// Intersection with the window in patch frame, kept when at least
/// `min_area_fraction` of the box area lies inside (and the overlap is
/// non-empty).
[[nodiscard]] std::optional<Box> clip_box_to_patch(const Box& b, const PatchWindow& w, double min_area_fraction);

/// Patch ids to keep: all labelled patches plus round-half-up(keep_fraction *
/// N_empty) of the empty ones, chosen by a seeded Fisher-Yates shuffle of the
/// ascending empty ids.
[[nodiscard]] std::set<int> filter_negative_patches(const std::map<int, std::vector<LabeledPoint>>& patch_labels,
                                                    double keep_fraction, std::uint64_t seed);

}  // namespace polokit
