#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "polokit/io.hpp"
#include "polokit/losses.hpp"
#include "polokit/rng.hpp"

namespace polokit::cli {

namespace {

// Smallest gap between the best and second-best nearest-neighbour distance
// over all min terms, and the smallest best distance. The loss is smooth
// around the instance when both are comfortably larger than the FD step.
double min_margin(const std::vector<Point2D>& preds, const std::vector<Point2D>& targets) {
  double margin = std::numeric_limits<double>::infinity();
  auto scan = [&](Point2D q, const std::vector<Point2D>& set) {
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    for (const auto& p : set) {
      const double d = euclidean_distance(q, p);
      if (d < best) {
        second = best;
        best = d;
      } else if (d < second) {
        second = d;
      }
    }
    margin = std::min({margin, second - best, best});
  };
  for (const auto& t : targets) scan(t, preds);
  for (const auto& p : preds) scan(p, targets);
  return margin;
}

struct Reporter {
  std::ostream& out;
  bool ok = true;

  void check(const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
    ok = ok && pass;
  }
};

}  // namespace

bool run_loss_check(std::ostream& out, std::uint64_t seed, std::size_t instances) {
  Reporter r{out};

  {
    const std::vector<Point2D> a{{0, 0}}, b{{3, 4}};
    const double v = loss_average_hausdorff(a, b).value;
    r.check("hausdorff singleton", v == 10.0, "value " + format_number(v) + ", expected 10");
  }
  {
    const std::vector<Point2D> a{{0, 0}, {10, 0}}, b{{0, 0}};
    const double v = loss_average_hausdorff(a, b).value;
    r.check("hausdorff two-to-one", v == 5.0, "value " + format_number(v) + ", expected 5");
  }
  {
    const std::vector<PointPair> pairs{{{0, 0}, {3, 4}}};
    const double v = loss_mse(pairs).value;
    r.check("mse single pair", v == 25.0, "value " + format_number(v) + ", expected 25");
  }
  {
    const std::vector<double> q{0.9, 0.1}, t{1, 0};
    const double v = loss_bce(q, t).value;
    r.check("bce hand value", std::abs(v - 0.105360515657826) < 1e-12, "value " + format_number(v));
  }
  {
    const double v = loss_combined(2.0, 3.0, 1.0);
    r.check("combined alpha=1", v == 29.0, "value " + format_number(v) + ", expected 29");
  }

  Rng rng(seed);
  double worst_mse = 0.0;
  double worst_ah = 0.0;
  double worst_bce = 0.0;
  for (std::size_t k = 0; k < instances; ++k) {
    std::vector<PointPair> pairs(10);
    for (auto& p : pairs) {
      p.prediction = {rng.uniform(0, 64), rng.uniform(0, 64)};
      p.target = {rng.uniform(0, 64), rng.uniform(0, 64)};
    }
    std::vector<Point2D> preds;
    for (const auto& p : pairs) preds.push_back(p.prediction);
    worst_mse = std::max(worst_mse, gradient_check_points(
                                        [&](std::span<const Point2D> x) {
                                          std::vector<PointPair> shifted = pairs;
                                          for (std::size_t i = 0; i < x.size(); ++i) shifted[i].prediction = x[i];
                                          return loss_mse(shifted);
                                        },
                                        preds));

    std::vector<Point2D> ah_preds, ah_targets;
    do {
      const std::size_t np = 2 + rng.index(8);
      const std::size_t nt = 2 + rng.index(8);
      ah_preds.clear();
      ah_targets.clear();
      for (std::size_t i = 0; i < np; ++i) ah_preds.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
      for (std::size_t i = 0; i < nt; ++i) ah_targets.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    } while (min_margin(ah_preds, ah_targets) < 1e-2);
    worst_ah = std::max(worst_ah, gradient_check_points(
                                      [&](std::span<const Point2D> x) { return loss_average_hausdorff(x, ah_targets); },
                                      ah_preds));

    std::vector<double> q(6), t(6);
    for (std::size_t i = 0; i < q.size(); ++i) {
      q[i] = rng.uniform(0.05, 0.95);
      t[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    worst_bce = std::max(worst_bce, gradient_check([&](std::span<const double> x) { return loss_bce(x, t); }, q));
  }
  r.check("mse gradient", worst_mse < 1e-6, "max rel error " + format_number(worst_mse) + " < 1e-6");
  r.check("hausdorff gradient", worst_ah < 1e-5, "max rel error " + format_number(worst_ah) + " < 1e-5");
  r.check("bce gradient", worst_bce < 1e-5, "max rel error " + format_number(worst_bce) + " < 1e-5");
  out << (r.ok ? "loss-check: all checks passed\n" : "loss-check: FAILED\n");
  return r.ok;
}

}  // namespace polokit::cli
