#pragma once

// Decoding of a point head: every grid cell carries two coordinate
// activations and C class logits. The coordinate offset of a cell is
// sigmoid(a) * 2 - 0.5 cell units from the cell's top-left corner, so a cell
// can place its point anywhere in (-0.5, 1.5) cells along each axis.

#include <cstddef>
#include <span>
#include <vector>

#include "polokit/core.hpp"

namespace polokit {

struct GridSpec {
  int cells_x = 0;
  int cells_y = 0;
  double stride = 1.0;  ///< pixels per cell

  void validate() const;
  [[nodiscard]] std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_x) * static_cast<std::size_t>(cells_y);
  }
};

struct CellIndex {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Raw head output. `channels` is cell-major: for each row, for each column,
/// the 2 + num_classes values (a1, a2, logit_0, ..., logit_{C-1}).
struct ActivationGrid {
  GridSpec grid;
  int num_classes = 0;
  std::vector<double> channels;

  [[nodiscard]] std::size_t channels_per_cell() const { return 2 + static_cast<std::size_t>(num_classes); }
  [[nodiscard]] std::span<const double> cell(CellIndex c) const;
  /// Throws ValidationError on size mismatch or non-finite values.
  void validate() const;
};

struct Assignment {
  CellIndex cell;
  std::size_t gt_index = 0;
  /// Another ground truth shares this cell.
  bool colliding = false;
};

[[nodiscard]] double sigmoid(double a);

/// sigmoid(a) * 2 - 0.5, held strictly inside (-0.5, 1.5) even where the
/// sigmoid saturates in double precision.
[[nodiscard]] double cell_offset(double activation);

/// Point in patch-frame pixels: ((col + off_x) * stride, (row + off_y) * stride).
[[nodiscard]] Point2D decode_cell(double a1, double a2, CellIndex cell, const GridSpec& grid);

/// One detection per cell whose max class probability is >= conf_threshold,
/// labelled with the argmax class (lowest index on ties); sorted by (row, col).
[[nodiscard]] std::vector<Detection> decode_grid(const ActivationGrid& acts, double conf_threshold);

/// Cell containment assignment: floor(coord / stride) on each axis. Throws
/// ValidationError for a ground truth outside [0, cells * stride).
[[nodiscard]] std::vector<Assignment> assign_targets(const std::vector<LabeledPoint>& gts, const GridSpec& grid);

struct PointPair {
  Point2D prediction;
  Point2D target;
};

using PairedPoints = std::vector<PointPair>;

/// Prediction/target pairs for the regression loss: each assigned ground
/// truth paired with the point decoded at its cell.
[[nodiscard]] std::vector<PointPair> pair_predictions(const ActivationGrid& acts,
                                                      const std::vector<Assignment>& assignments,
                                                      const std::vector<LabeledPoint>& gts);

}  // namespace polokit
