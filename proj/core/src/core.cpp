#include "polokit/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polokit {

RadiusTable::RadiusTable(std::map<ClassId, double> radii, double scale) : radii_(std::move(radii)), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw ValidationError("radius scale must be positive and finite");
  }
  for (const auto& [c, r] : radii_) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ValidationError("radius for class " + std::to_string(c.value) + " must be positive and finite");
    }
  }
}

double RadiusTable::base_radius(ClassId c) const {
  auto it = radii_.find(c);
  if (it == radii_.end()) {
    throw ValidationError("no radius defined for class " + std::to_string(c.value));
  }
  return it->second;
}

double RadiusTable::radius(ClassId c) const { return base_radius(c) * scale_; }

double RadiusTable::max_radius() const {
  double m = 0.0;
  for (const auto& [c, r] : radii_) m = std::max(m, r);
  return m * scale_;
}

RadiusTable RadiusTable::with_scale(double scale) const { return RadiusTable(radii_, scale); }

RadiusTable RadiusTable::with_radii_multiplied(double factor) const {
  auto radii = radii_;
  for (auto& [c, r] : radii) r *= factor;
  return RadiusTable(std::move(radii), scale_);
}

void RadiusTable::set(ClassId c, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("radius for class " + std::to_string(c.value) + " must be positive and finite");
  }
  radii_[c] = radius;
}

double euclidean_distance(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require_finite(Point2D p, const char* what) {
  if (!is_finite(p)) throw ValidationError(std::string(what) + ": coordinates must be finite");
}

void validate(const Detection& d) {
  require_finite(d.point, "detection");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw ValidationError("detection confidence must lie in [0,1]");
  }
}

}  // namespace polokit
