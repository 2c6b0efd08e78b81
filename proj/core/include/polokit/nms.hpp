#pragma once

// Distance-over-Radius (DoR) metric and greedy point NMS built on it.

#include <vector>

#include "polokit/core.hpp"

namespace polokit {

struct NmsConfig {
  /// Suppress when DoR < dor_threshold (strict).
  double dor_threshold = 0.6;
  /// Only detections of the same class suppress each other.
  bool class_aware = true;

  void validate() const;
};

/// distance(a, b) / radius; throws ValidationError for radius <= 0.
[[nodiscard]] double dor(Point2D a, Point2D b, double radius);

/// Processing order: confidence descending, then (class_id, y, x) ascending.
[[nodiscard]] bool nms_order_less(const Detection& a, const Detection& b);

/// Greedy DoR suppression. Detections are visited in nms_order_less order;
/// one is dropped when its DoR to an already kept detection (same class in
/// class-aware mode) is below the threshold, the radius being the kept
/// detection's scaled class radius. Returns the kept detections in
/// processing order. Neighbour search uses a uniform spatial hash.
[[nodiscard]] std::vector<Detection> dor_nms(std::vector<Detection> detections, const RadiusTable& radii,
                                             const NmsConfig& cfg);

/// Same contract as dor_nms using the all-pairs scan. Reference path.
[[nodiscard]] std::vector<Detection> dor_nms_naive(std::vector<Detection> detections, const RadiusTable& radii,
                                                   const NmsConfig& cfg);

}  // namespace polokit
