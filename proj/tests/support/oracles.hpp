#pragma once

// Test-only reference computations. Nothing here calls into the library's
// algorithms; only the plain value types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "polokit/core.hpp"
#include "polokit/tiler.hpp"

namespace polokit::oracle {

inline double dist(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Every origin k*stride that still fits, plus the flush final origin when
/// the last fitting window falls short of the border.
inline std::vector<int> enumerate_origins(int extent, int patch, int stride) {
  if (extent <= patch) return {0};
  std::vector<int> out;
  for (int x = 0; x + patch <= extent; x += stride) out.push_back(x);
  if (out.back() + patch < extent) out.push_back(extent - patch);
  return out;
}

/// Pixel-by-pixel coverage count of windows over a width x height image.
inline std::vector<int> coverage_map(const std::vector<PatchWindow>& windows, int width, int height) {
  std::vector<int> cover(static_cast<std::size_t>(width) * height, 0);
  for (const auto& w : windows) {
    for (int y = w.origin_y; y < w.origin_y + w.height; ++y) {
      for (int x = w.origin_x; x < w.origin_x + w.width; ++x) ++cover[static_cast<std::size_t>(y) * width + x];
    }
  }
  return cover;
}

/// Average Hausdorff distance, evaluated term by term.
inline double average_hausdorff(const std::vector<Point2D>& pred, const std::vector<Point2D>& gt) {
  double a = 0.0;
  for (const auto& g : gt) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pred) m = std::min(m, dist(p, g));
    a += m;
  }
  double b = 0.0;
  for (const auto& p : pred) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : gt) m = std::min(m, dist(p, g));
    b += m;
  }
  return a / gt.size() + b / pred.size();
}

/// Central finite-difference gradient of f at x.
template <typename F>
std::vector<double> numeric_gradient(F&& f, std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i];
    x[i] = s + h;
    const double up = f(x);
    x[i] = s - h;
    const double down = f(x);
    x[i] = s;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

/// Greedy DoR NMS written from the definition: sort by (confidence desc,
/// class, y, x); keep a detection unless some earlier kept one of the same
/// class (when class_aware) lies at distance/radius_kept < threshold.
template <typename RadiusFn>
std::vector<Detection> nms(std::vector<Detection> dets, RadiusFn radius_of, double threshold, bool class_aware) {
  std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    if (a.point.y != b.point.y) return a.point.y < b.point.y;
    return a.point.x < b.point.x;
  });
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    bool drop = false;
    for (const auto& k : kept) {
      if (class_aware && k.class_id != d.class_id) continue;
      if (std::sqrt((d.point.x - k.point.x) * (d.point.x - k.point.x) + (d.point.y - k.point.y) * (d.point.y - k.point.y)) /
              radius_of(k.class_id) <
          threshold) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(d);
  }
  return kept;
}

/// k such that |X - n p| <= k sigma bounds the binomial count.
inline bool within_binomial(std::size_t observed, std::size_t n, double p, double sigmas = 3.0) {
  const double mean = n * p;
  const double sd = std::sqrt(n * p * (1 - p));
  return std::abs(static_cast<double>(observed) - mean) <= sigmas * sd;
}

/// Random detections clustered enough that suppression actually happens.
inline std::vector<Detection> random_detections(std::mt19937_64& gen, std::size_t n, double extent, std::uint32_t classes) {
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> cls(0, classes - 1);
  std::vector<Detection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({{pos(gen), pos(gen)}, ClassId(cls(gen)), conf(gen)});
  return out;
}

}  // namespace polokit::oracle
