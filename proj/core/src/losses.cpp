#include "polokit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polokit {

namespace {

// Index of the nearest point in `set` to `p` (lowest index on ties).
std::pair<std::size_t, double> nearest(Point2D p, std::span<const Point2D> set) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double d = euclidean_distance(p, set[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return {best, best_d};
}

// Gradient of d(pred, other) w.r.t. pred.
Point2D distance_gradient(Point2D pred, Point2D other, double d) {
  if (d == 0.0) return {0.0, 0.0};
  return {(pred.x - other.x) / d, (pred.y - other.y) / d};
}

}  // namespace

PointLoss loss_average_hausdorff(std::span<const Point2D> predictions, std::span<const Point2D> targets) {
  if (predictions.empty() || targets.empty()) {
    throw ValidationError("average Hausdorff distance is undefined for an empty point set");
  }
  PointLoss out;
  out.gradient.assign(predictions.size(), Point2D{});
  const double wt = 1.0 / static_cast<double>(targets.size());
  const double wp = 1.0 / static_cast<double>(predictions.size());

  double target_term = 0.0;
  for (const Point2D& t : targets) {
    const auto [j, d] = nearest(t, predictions);
    target_term += d;
    const Point2D g = distance_gradient(predictions[j], t, d);
    out.gradient[j] = out.gradient[j] + wt * g;
  }
  double prediction_term = 0.0;
  for (std::size_t j = 0; j < predictions.size(); ++j) {
    const auto [i, d] = nearest(predictions[j], targets);
    prediction_term += d;
    out.gradient[j] = out.gradient[j] + wp * distance_gradient(predictions[j], targets[i], d);
  }
  out.value = wt * target_term + wp * prediction_term;
  return out;
}

PointLoss loss_mse(std::span<const PointPair> pairs) {
  if (pairs.empty()) throw ValidationError("MSE loss needs at least one prediction/target pair");
  PointLoss out;
  out.gradient.reserve(pairs.size());
  const double n = static_cast<double>(pairs.size());
  double sum = 0.0;
  for (const auto& [pred, target] : pairs) {
    const Point2D diff = pred - target;
    sum += diff.x * diff.x + diff.y * diff.y;
    out.gradient.push_back((2.0 / n) * diff);
  }
  out.value = sum / n;
  return out;
}

ScalarLoss loss_bce(std::span<const double> probabilities, std::span<const double> targets) {
  if (probabilities.size() != targets.size()) {
    throw ValidationError("BCE: " + std::to_string(probabilities.size()) + " probabilities vs " +
                          std::to_string(targets.size()) + " targets");
  }
  if (probabilities.empty()) throw ValidationError("BCE needs at least one entry");
  ScalarLoss out;
  out.gradient.reserve(probabilities.size());
  const double n = static_cast<double>(probabilities.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double raw = probabilities[k];
    const double t = targets[k];
    if (!std::isfinite(raw)) throw ValidationError("BCE: probability is not finite");
    if (t != 0.0 && t != 1.0) throw ValidationError("BCE: targets must be 0 or 1");
    const double q = std::clamp(raw, kBceEpsilon, 1.0 - kBceEpsilon);
    sum += -(t * std::log(q) + (1.0 - t) * std::log(1.0 - q));
    const bool clamped = raw < kBceEpsilon || raw > 1.0 - kBceEpsilon;
    out.gradient.push_back(clamped ? 0.0 : (-t / q + (1.0 - t) / (1.0 - q)) / n);
  }
  out.value = sum / n;
  return out;
}

double loss_combined(double l_point, double l_bce, double alpha) {
  if (!(alpha >= LossWeights::kAlphaMin && alpha <= LossWeights::kAlphaMax)) {
    throw ValidationError("alpha must lie in [1, 9]");
  }
  return alpha * l_point + (10.0 - alpha) * l_bce;
}

double loss_legacy_weighted(double l_point, double l_bce) {
  return LossWeights::kLegacyBox * l_point + LossWeights::kLegacyClass * l_bce;
}

double gradient_check(const DifferentiableFn& fn, std::span<const double> inputs, double epsilon) {
  const ScalarLoss analytic = fn(inputs);
  if (analytic.gradient.size() != inputs.size()) {
    throw ValidationError("gradient_check: gradient size does not match input size");
  }
  std::vector<double> probe(inputs.begin(), inputs.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double saved = probe[k];
    probe[k] = saved + epsilon;
    const double up = fn(probe).value;
    probe[k] = saved - epsilon;
    const double down = fn(probe).value;
    probe[k] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic.gradient[k];
    const double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

double gradient_check_points(const std::function<PointLoss(std::span<const Point2D>)>& loss,
                             std::span<const Point2D> predictions, double epsilon) {
  std::vector<double> flat;
  flat.reserve(predictions.size() * 2);
  for (const auto& p : predictions) {
    flat.push_back(p.x);
    flat.push_back(p.y);
  }
  auto wrapped = [&loss](std::span<const double> x) {
    std::vector<Point2D> pts(x.size() / 2);
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = {x[2 * k], x[2 * k + 1]};
    PointLoss pl = loss(pts);
    ScalarLoss out{pl.value, {}};
    out.gradient.reserve(x.size());
    for (const auto& g : pl.gradient) {
      out.gradient.push_back(g.x);
      out.gradient.push_back(g.y);
    }
    return out;
  };
  return gradient_check(wrapped, flat, epsilon);
}

}  // namespace polokit
