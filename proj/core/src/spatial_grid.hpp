#pragma once

// Uniform bucket grid over the plane. Query returns every inserted item in
// the 3x3 block of cells around a point, which is a superset of the items
// within `cell_size` of it.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "polokit/core.hpp"

namespace polokit::detail {

class SpatialGrid {
 public:
  /// `reach` is the largest query distance; buckets are padded slightly so
  /// floor() rounding at cell edges cannot push a neighbour two cells away.
  explicit SpatialGrid(double reach) : cell_(reach * (1.0 + 1e-9) + 1e-12) {}

  void insert(Point2D p, std::uint32_t group, std::size_t item) { buckets_[key(cell_of(p.x), cell_of(p.y), group)].push_back(item); }

  template <typename Fn>
  bool any_near(Point2D p, std::uint32_t group, Fn&& pred) const {
    const std::int64_t cx = cell_of(p.x);
    const std::int64_t cy = cell_of(p.y);
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        auto it = buckets_.find(key(cx + dx, cy + dy, group));
        if (it == buckets_.end()) continue;
        for (std::size_t item : it->second) {
          if (pred(item)) return true;
        }
      }
    }
    return false;
  }

  template <typename Fn>
  void for_each_near(Point2D p, std::uint32_t group, Fn&& fn) const {
    any_near(p, group, [&](std::size_t item) {
      fn(item);
      return false;
    });
  }

 private:
  struct Key {
    std::int64_t x;
    std::int64_t y;
    std::uint32_t group;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.group) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  [[nodiscard]] std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static Key key(std::int64_t x, std::int64_t y, std::uint32_t group) { return {x, y, group}; }

  double cell_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
};

}  // namespace polokit::detail
