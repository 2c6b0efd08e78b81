#include "polokit/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace polokit {

namespace {
constexpr double kOffsetLow = -0.5;
constexpr double kOffsetHigh = 1.5;
}  // namespace

void GridSpec::validate() const {
  if (cells_x <= 0 || cells_y <= 0) throw ValidationError("grid must have at least one cell per axis");
  if (!(stride > 0.0) || !std::isfinite(stride)) throw ValidationError("grid stride must be positive");
}

std::span<const double> ActivationGrid::cell(CellIndex c) const {
  const std::size_t per = channels_per_cell();
  const std::size_t offset =
      (static_cast<std::size_t>(c.row) * static_cast<std::size_t>(grid.cells_x) + static_cast<std::size_t>(c.col)) * per;
  return std::span<const double>(channels).subspan(offset, per);
}

void ActivationGrid::validate() const {
  grid.validate();
  if (num_classes < 1) throw ValidationError("activation grid needs at least one class channel");
  const std::size_t expected = grid.cell_count() * channels_per_cell();
  if (channels.size() != expected) {
    throw ValidationError("activation grid has " + std::to_string(channels.size()) + " values, expected " +
                          std::to_string(expected));
  }
  for (double v : channels) {
    if (!std::isfinite(v)) throw ValidationError("activation grid contains a non-finite value");
  }
}

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

double cell_offset(double activation) {
  static const double lo = std::nextafter(kOffsetLow, 0.0);
  static const double hi = std::nextafter(kOffsetHigh, 0.0);
  return std::clamp(sigmoid(activation) * 2.0 - 0.5, lo, hi);
}

Point2D decode_cell(double a1, double a2, CellIndex cell, const GridSpec& grid) {
  return {(cell.col + cell_offset(a1)) * grid.stride, (cell.row + cell_offset(a2)) * grid.stride};
}

std::vector<Detection> decode_grid(const ActivationGrid& acts, double conf_threshold) {
  acts.validate();
  std::vector<Detection> out;
  for (int row = 0; row < acts.grid.cells_y; ++row) {
    for (int col = 0; col < acts.grid.cells_x; ++col) {
      const auto values = acts.cell({row, col});
      const auto logits = values.subspan(2);
      const auto best = std::max_element(logits.begin(), logits.end());
      const double confidence = sigmoid(*best);
      if (confidence < conf_threshold) continue;
      const auto cls = static_cast<std::uint32_t>(best - logits.begin());
      out.push_back({decode_cell(values[0], values[1], {row, col}, acts.grid), ClassId(cls), confidence});
    }
  }
  return out;
}

std::vector<Assignment> assign_targets(const std::vector<LabeledPoint>& gts, const GridSpec& grid) {
  grid.validate();
  const double width = grid.cells_x * grid.stride;
  const double height = grid.cells_y * grid.stride;
  std::vector<Assignment> out;
  out.reserve(gts.size());
  std::map<CellIndex, std::size_t> occupancy;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const Point2D p = gts[i].point;
    if (!(p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height)) {
      throw ValidationError("ground truth " + std::to_string(i) + " lies outside the patch");
    }
    CellIndex cell{static_cast<int>(std::floor(p.y / grid.stride)), static_cast<int>(std::floor(p.x / grid.stride))};
    // Guard against rounding at the last cell edge.
    cell.row = std::min(cell.row, grid.cells_y - 1);
    cell.col = std::min(cell.col, grid.cells_x - 1);
    ++occupancy[cell];
    out.push_back({cell, i, false});
  }
  for (auto& a : out) a.colliding = occupancy[a.cell] > 1;
  return out;
}

std::vector<PointPair> pair_predictions(const ActivationGrid& acts, const std::vector<Assignment>& assignments,
                                        const std::vector<LabeledPoint>& gts) {
  acts.validate();
  std::vector<PointPair> pairs;
  pairs.reserve(assignments.size());
  for (const auto& a : assignments) {
    if (a.gt_index >= gts.size()) throw ValidationError("assignment refers to a missing ground truth");
    if (a.cell.row < 0 || a.cell.row >= acts.grid.cells_y || a.cell.col < 0 || a.cell.col >= acts.grid.cells_x) {
      throw ValidationError("assignment cell lies outside the grid");
    }
    const auto values = acts.cell(a.cell);
    pairs.push_back({decode_cell(values[0], values[1], a.cell, acts.grid), gts[a.gt_index].point});
  }
  return pairs;
}

}  // namespace polokit
