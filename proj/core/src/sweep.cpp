#include "polokit/sweep.hpp"

#include <cmath>

#include "polokit/io.hpp"
#include "polokit/parallel.hpp"

namespace polokit {

SweepConfig SweepConfig::defaults() {
  SweepConfig cfg;
  for (int i = 1; i <= 8; ++i) cfg.radius_scales.push_back(0.25 * i);
  for (int i = 1; i <= 10; ++i) cfg.dor_thresholds.push_back(i / 10.0);
  return cfg;
}

void SweepConfig::validate() const {
  if (radius_scales.empty() || dor_thresholds.empty()) throw ValidationError("sweep axes must be non-empty");
  for (double s : radius_scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("sweep radius scales must be positive");
  }
  for (double t : dor_thresholds) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("sweep DoR thresholds must be >= 0");
  }
}

SweepResult run_sweep(const ImageDetections& raw, const ImageLabels& gts, const RadiusTable& base_radii,
                      const SweepConfig& cfg) {
  cfg.validate();
  std::set<ClassId> classes;
  for (const auto& [c, r] : base_radii.entries()) classes.insert(c);

  SweepResult result;
  result.num_scales = cfg.radius_scales.size();
  result.num_thresholds = cfg.dor_thresholds.size();
  result.cells.resize(result.num_scales * result.num_thresholds);

  parallel_for(result.cells.size(), [&](std::size_t idx) {
    SweepCell& cell = result.cells[idx];
    cell.radius_scale = cfg.radius_scales[idx / result.num_thresholds];
    cell.dor_threshold = cfg.dor_thresholds[idx % result.num_thresholds];
    const RadiusTable radii = base_radii.with_scale(base_radii.scale() * cell.radius_scale);
    const NmsConfig nms{cell.dor_threshold, cfg.class_aware};
    ImageDetections kept;
    for (const auto& [image, dets] : raw) {
      auto survivors = dor_nms(dets, radii, nms);
      cell.kept += survivors.size();
      kept.emplace(image, std::move(survivors));
    }
    cell.report = mae_per_class(kept, gts, classes);
  });
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "class,scale,threshold,mae,pred_count\n";
  std::set<ClassId> classes;
  for (const auto& cell : result.cells) {
    for (const auto& [c, s] : cell.report.classes) classes.insert(c);
  }
  for (ClassId c : classes) {
    for (const auto& cell : result.cells) {
      auto it = cell.report.classes.find(c);
      const ClassCountStats s = it == cell.report.classes.end() ? ClassCountStats{} : it->second;
      os << c.value << ',' << format_number(cell.radius_scale) << ',' << format_number(cell.dor_threshold) << ','
         << format_number(s.mae) << ',' << s.predicted_total << '\n';
    }
  }
}

}  // namespace polokit
