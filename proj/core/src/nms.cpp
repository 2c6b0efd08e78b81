#include "polokit/nms.hpp"

#include <algorithm>
#include <cmath>

#include "spatial_grid.hpp"

namespace polokit {

void NmsConfig::validate() const {
  if (!(dor_threshold >= 0.0) || !std::isfinite(dor_threshold)) {
    throw ValidationError("DoR threshold must be finite and >= 0");
  }
}

double dor(Point2D a, Point2D b, double radius) {
  if (!(radius > 0.0)) throw ValidationError("DoR radius must be positive");
  return euclidean_distance(a, b) / radius;
}

bool nms_order_less(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  if (a.point.y != b.point.y) return a.point.y < b.point.y;
  return a.point.x < b.point.x;
}

namespace {

// Validates inputs, sorts into processing order and caches per-detection radii.
std::vector<double> prepare(std::vector<Detection>& dets, const RadiusTable& radii, const NmsConfig& cfg) {
  cfg.validate();
  std::vector<double> r;
  r.reserve(dets.size());
  for (const auto& d : dets) validate(d);
  std::stable_sort(dets.begin(), dets.end(), nms_order_less);
  for (const auto& d : dets) r.push_back(radii.radius(d.class_id));
  return r;
}

bool suppresses(const Detection& kept, double kept_radius, const Detection& cand, const NmsConfig& cfg) {
  if (cfg.class_aware && kept.class_id != cand.class_id) return false;
  return dor(cand.point, kept.point, kept_radius) < cfg.dor_threshold;
}

}  // namespace

std::vector<Detection> dor_nms(std::vector<Detection> detections, const RadiusTable& radii, const NmsConfig& cfg) {
  const std::vector<double> r = prepare(detections, radii, cfg);
  if (cfg.dor_threshold == 0.0 || detections.empty()) return detections;

  const double reach = cfg.dor_threshold * *std::max_element(r.begin(), r.end());
  detail::SpatialGrid grid(reach);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& cand = detections[i];
    const std::uint32_t group = cfg.class_aware ? cand.class_id.value : 0U;
    const bool dropped = grid.any_near(cand.point, group, [&](std::size_t k) {
      return suppresses(detections[k], r[k], cand, cfg);
    });
    if (dropped) continue;
    kept.push_back(i);
    grid.insert(cand.point, group, i);
  }
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(detections[k]);
  return out;
}

std::vector<Detection> dor_nms_naive(std::vector<Detection> detections, const RadiusTable& radii,
                                     const NmsConfig& cfg) {
  const std::vector<double> r = prepare(detections, radii, cfg);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const bool dropped = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return suppresses(detections[k], r[k], detections[i], cfg);
    });
    if (!dropped) kept.push_back(i);
  }
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(detections[k]);
  return out;
}

}  // namespace polokit
