#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "polokit/core.hpp"
#include "polokit/losses.hpp"
#include "polokit/nms.hpp"
#include "polokit/tiler.hpp"

namespace polokit {

/// Settings shared by the pipeline stages. Defaults: 640 px patches with
/// 10% overlap, 15% box-area rule, 5% of empty patches kept; 40 px radii
/// (30 px for gulls) scaled by 1.25; DoR threshold 0.6; alpha 1;
/// confidence threshold 0.25.
struct RunConfig {
  TilingConfig tiling;
  std::map<ClassId, double> radii;
  double radius_scale = 1.25;
  double dor_threshold = 0.6;
  double conf_threshold = 0.25;
  double alpha = 1.0;
  std::vector<std::string> class_names;

  [[nodiscard]] static RunConfig defaults();

  [[nodiscard]] RadiusTable radius_table() const { return RadiusTable(radii, radius_scale); }
  [[nodiscard]] NmsConfig nms() const { return NmsConfig{dor_threshold, true}; }
  void validate() const;
};

/// Missing keys keep their defaults; `radii` entries override the default
/// radius per class and are keyed by class id ("2") or by an entry of
/// class_names ("Gull").
[[nodiscard]] RunConfig read_run_config(std::istream& is, std::string_view source = "<config>");
void write_run_config(std::ostream& os, const RunConfig& cfg);

}  // namespace polokit
