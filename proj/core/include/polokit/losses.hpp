#pragma once

// Point-set regression losses and the class loss, each returning its value
// together with the analytic gradient, plus a central-difference checker.

#include <functional>
#include <span>
#include <vector>

#include "polokit/core.hpp"
#include "polokit/decode.hpp"

namespace polokit {

/// Loss weighting. `alpha` balances point regression against classification
/// as alpha * L_point + (10 - alpha) * L_cls. The legacy constants are the
/// box-detector scheme (class 0.5, box 7.5, distribution 1.5); point models
/// reuse the box weight for the point term.
struct LossWeights {
  double alpha = 1.0;

  static constexpr double kLegacyClass = 0.5;
  static constexpr double kLegacyBox = 7.5;
  static constexpr double kLegacyDistribution = 1.5;
  static constexpr double kAlphaMin = 1.0;
  static constexpr double kAlphaMax = 9.0;
};

struct PointLoss {
  double value = 0.0;
  /// d value / d prediction, one entry per prediction.
  std::vector<Point2D> gradient;
};

struct ScalarLoss {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Average Hausdorff distance between predictions and targets:
///   mean_i min_j d(pred_j, target_i) + mean_j min_i d(pred_j, target_i).
/// Gradient is w.r.t. predictions; each min term routes to its lowest-index
/// minimiser, and coincident points contribute a zero subgradient.
/// Throws ValidationError if either set is empty.
[[nodiscard]] PointLoss loss_average_hausdorff(std::span<const Point2D> predictions, std::span<const Point2D> targets);

/// Mean squared error over corresponding pairs; gradient 2/N (pred - target).
[[nodiscard]] PointLoss loss_mse(std::span<const PointPair> pairs);

inline constexpr double kBceEpsilon = 1e-7;

/// Mean one-vs-all binary cross-entropy. Probabilities are clamped to
/// [eps, 1 - eps]; the gradient w.r.t. q is zero where the clamp is active.
[[nodiscard]] ScalarLoss loss_bce(std::span<const double> probabilities, std::span<const double> targets);

/// alpha * l_point + (10 - alpha) * l_bce; throws unless alpha is in [1, 9].
[[nodiscard]] double loss_combined(double l_point, double l_bce, double alpha);

/// 7.5 * l_point + 0.5 * l_bce.
[[nodiscard]] double loss_legacy_weighted(double l_point, double l_bce);

/// Value-and-gradient function over a flat parameter vector.
using DifferentiableFn = std::function<ScalarLoss(std::span<const double>)>;

/// Max over coordinates of |analytic - numeric| / max(1, |analytic|, |numeric|)
/// where numeric is the central difference with step `epsilon`.
[[nodiscard]] double gradient_check(const DifferentiableFn& fn, std::span<const double> inputs, double epsilon = 1e-5);

/// Convenience: check a point loss w.r.t. the flattened predictions.
[[nodiscard]] double gradient_check_points(const std::function<PointLoss(std::span<const Point2D>)>& loss,
                                           std::span<const Point2D> predictions, double epsilon = 1e-5);

}  // namespace polokit
