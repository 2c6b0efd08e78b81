#pragma once

// Shared value types for point-labelled detection: locations, class ids,
// detections and the per-class radius table that drives suppression,
// matching and pseudo-box generation.
//
// Frame convention: continuous pixel coordinates, origin at the top-left
// corner of the image (or patch), x to the right, y downward.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace polokit {

/// Input that violates a documented contract (bad value, malformed record).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem or stream failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
  friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }
};

/// Index into the class catalog of a run.
struct ClassId {
  std::uint32_t value = 0;

  constexpr ClassId() = default;
  constexpr explicit ClassId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(ClassId, ClassId) = default;
};

struct LabeledPoint {
  Point2D point;
  ClassId class_id;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

/// A predicted point. `confidence` is the maximum per-class probability of
/// the emitting grid cell.
struct Detection {
  Point2D point;
  ClassId class_id;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct ImageSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Per-class radius r_c in pixels, with a global multiplier applied on lookup.
class RadiusTable {
 public:
  RadiusTable() = default;
  explicit RadiusTable(std::map<ClassId, double> radii, double scale = 1.0);

  /// Unscaled radius; throws ValidationError for an unknown class.
  [[nodiscard]] double base_radius(ClassId c) const;
  /// radius * scale.
  [[nodiscard]] double radius(ClassId c) const;
  [[nodiscard]] bool contains(ClassId c) const { return radii_.contains(c); }
  [[nodiscard]] double scale() const { return scale_; }
  /// Largest scaled radius over all classes, 0 for an empty table.
  [[nodiscard]] double max_radius() const;

  [[nodiscard]] RadiusTable with_scale(double scale) const;
  /// Copy with every base radius multiplied by `factor`; scale unchanged.
  [[nodiscard]] RadiusTable with_radii_multiplied(double factor) const;
  void set(ClassId c, double radius);

  [[nodiscard]] const std::map<ClassId, double>& entries() const { return radii_; }

 private:
  std::map<ClassId, double> radii_;
  double scale_ = 1.0;
};

[[nodiscard]] double euclidean_distance(Point2D a, Point2D b);

[[nodiscard]] bool is_finite(Point2D p);

/// Throws ValidationError if the point is not finite.
void require_finite(Point2D p, const char* what);
/// Throws ValidationError unless confidence is in [0,1] and the point is finite.
void validate(const Detection& d);

}  // namespace polokit

template <>
struct std::hash<polokit::ClassId> {
  std::size_t operator()(polokit::ClassId c) const noexcept { return std::hash<std::uint32_t>{}(c.value); }
};
