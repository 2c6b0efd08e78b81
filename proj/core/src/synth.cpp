#include "polokit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "polokit/rng.hpp"
#include "spatial_grid.hpp"

namespace polokit {

namespace {

void require_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0,1]");
}

bool inside(Point2D p, ImageSize image) {
  return p.x >= 0.0 && p.x < image.width && p.y >= 0.0 && p.y < image.height;
}

}  // namespace

void SceneConfig::validate() const {
  if (image.width <= 0 || image.height <= 0) throw ValidationError("scene image dimensions must be positive");
  if (cluster_count == 0) throw ValidationError("scene needs at least one cluster");
  if (!(cluster_spread > 0.0)) throw ValidationError("cluster_spread must be positive");
  if (min_separation && !(*min_separation >= 0.0)) throw ValidationError("min_separation must be >= 0");
  if (max_attempts_per_point == 0) throw ValidationError("max_attempts_per_point must be positive");
}

void DetectorNoise::validate() const {
  if (!(jitter_sigma >= 0.0)) throw ValidationError("jitter_sigma must be >= 0");
  require_rate(miss_rate, "miss_rate");
  require_rate(duplicate_rate, "duplicate_rate");
  require_rate(false_positive_rate, "false_positive_rate");
  require_rate(tp_confidence_min, "tp_confidence_min");
  require_rate(tp_confidence_max, "tp_confidence_max");
  require_rate(fp_confidence_min, "fp_confidence_min");
  require_rate(fp_confidence_max, "fp_confidence_max");
  if (tp_confidence_min > tp_confidence_max || fp_confidence_min > fp_confidence_max) {
    throw ValidationError("confidence ranges must satisfy min <= max");
  }
}

std::vector<LabeledPoint> generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  std::vector<Point2D> centres(cfg.cluster_count);
  for (auto& c : centres) c = {rng.uniform(0.0, cfg.image.width), rng.uniform(0.0, cfg.image.height)};

  const double sep = cfg.min_separation.value_or(0.0);
  detail::SpatialGrid grid(sep > 0.0 ? sep : 1.0);
  std::vector<LabeledPoint> out;
  for (std::size_t cls = 0; cls < cfg.abundance.size(); ++cls) {
    for (std::size_t n = 0; n < cfg.abundance[cls]; ++n) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < cfg.max_attempts_per_point && !placed; ++attempt) {
        const Point2D& c = centres[rng.index(centres.size())];
        const Point2D p{c.x + cfg.cluster_spread * rng.normal(), c.y + cfg.cluster_spread * rng.normal()};
        if (!inside(p, cfg.image)) continue;
        if (sep > 0.0 && grid.any_near(p, 0, [&](std::size_t k) { return euclidean_distance(out[k].point, p) < sep; })) {
          continue;
        }
        if (sep > 0.0) grid.insert(p, 0, out.size());
        out.push_back({p, ClassId(static_cast<std::uint32_t>(cls))});
        placed = true;
      }
      if (!placed) {
        throw ValidationError("scene infeasible: could not place point " + std::to_string(out.size()) +
                              " within the rejection budget (min_separation too large for the cluster layout)");
      }
    }
  }
  return out;
}

std::vector<Detection> simulate_detector(const std::vector<LabeledPoint>& gts, ImageSize image,
                                         const DetectorNoise& noise) {
  noise.validate();
  if (image.width <= 0 || image.height <= 0) throw ValidationError("image dimensions must be positive");
  Rng rng(noise.rng_seed);
  const double max_x = std::nextafter(static_cast<double>(image.width), 0.0);
  const double max_y = std::nextafter(static_cast<double>(image.height), 0.0);
  auto jitter = [&](Point2D p) {
    if (noise.jitter_sigma > 0.0) {
      p.x += noise.jitter_sigma * rng.normal();
      p.y += noise.jitter_sigma * rng.normal();
    }
    return Point2D{std::clamp(p.x, 0.0, max_x), std::clamp(p.y, 0.0, max_y)};
  };
  auto tp_confidence = [&] { return rng.uniform(noise.tp_confidence_min, noise.tp_confidence_max); };

  std::vector<Detection> out;
  std::set<ClassId> present;
  for (const auto& g : gts) {
    present.insert(g.class_id);
    if (rng.bernoulli(noise.miss_rate)) continue;
    out.push_back({jitter(g.point), g.class_id, tp_confidence()});
    if (rng.bernoulli(noise.duplicate_rate)) out.push_back({jitter(g.point), g.class_id, tp_confidence()});
  }
  const auto fp_count =
      static_cast<std::size_t>(std::floor(noise.false_positive_rate * static_cast<double>(gts.size()) + 0.5));
  const std::vector<ClassId> classes(present.begin(), present.end());
  for (std::size_t k = 0; k < fp_count; ++k) {
    const Point2D p{rng.uniform(0.0, image.width), rng.uniform(0.0, image.height)};
    const ClassId c = classes[rng.index(classes.size())];
    out.push_back({p, c, rng.uniform(noise.fp_confidence_min, noise.fp_confidence_max)});
  }
  return out;
}

}  // namespace polokit
