#include "polokit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "json_include.hpp"

namespace polokit {

using nlohmann::json;

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.class_names = {"Brant goose", "Canada goose", "Gull", "Emperor goose", "Other"};
  for (std::uint32_t c = 0; c < cfg.class_names.size(); ++c) cfg.radii[ClassId(c)] = 40.0;
  cfg.radii[ClassId(2)] = 30.0;
  return cfg;
}

void RunConfig::validate() const {
  tiling.validate();
  (void)radius_table();  // validates radii and scale
  nms().validate();
  if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0)) throw ValidationError("conf_threshold must lie in [0,1]");
  if (!(alpha >= LossWeights::kAlphaMin && alpha <= LossWeights::kAlphaMax)) {
    throw ValidationError("alpha must lie in [1, 9]");
  }
}

RunConfig read_run_config(std::istream& is, std::string_view source) {
  json obj;
  try {
    obj = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(source) + ": malformed JSON (" + e.what() + ")");
  }
  if (!obj.is_object()) throw ValidationError(std::string(source) + ": run config must be a JSON object");

  RunConfig cfg = RunConfig::defaults();
  try {
    auto get = [&](const char* key, auto& target) {
      if (obj.contains(key)) target = obj.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("patch_size", cfg.tiling.patch_size);
    get("overlap_fraction", cfg.tiling.overlap_fraction);
    get("min_box_area_fraction", cfg.tiling.min_box_area_fraction);
    get("negative_keep_fraction", cfg.tiling.negative_keep_fraction);
    get("rng_seed", cfg.tiling.rng_seed);
    get("radius_scale", cfg.radius_scale);
    get("dor_threshold", cfg.dor_threshold);
    get("conf_threshold", cfg.conf_threshold);
    get("alpha", cfg.alpha);
    get("class_names", cfg.class_names);
    if (obj.contains("radii")) {
      const json& radii = obj.at("radii");
      if (!radii.is_object()) throw ValidationError(std::string(source) + ": 'radii' must be an object");
      for (const auto& [key, value] : radii.items()) {
        std::uint32_t id = 0;
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
        if (ec != std::errc() || ptr != key.data() + key.size()) {
          auto it = std::find(cfg.class_names.begin(), cfg.class_names.end(), key);
          if (it == cfg.class_names.end()) {
            throw ValidationError(std::string(source) + ": radius key '" + key + "' is neither a class id nor a class name");
          }
          id = static_cast<std::uint32_t>(it - cfg.class_names.begin());
        }
        cfg.radii[ClassId(id)] = value.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

void write_run_config(std::ostream& os, const RunConfig& cfg) {
  json radii = json::object();
  for (const auto& [c, r] : cfg.radii) radii[std::to_string(c.value)] = r;
  const json obj = {{"patch_size", cfg.tiling.patch_size},
                    {"overlap_fraction", cfg.tiling.overlap_fraction},
                    {"min_box_area_fraction", cfg.tiling.min_box_area_fraction},
                    {"negative_keep_fraction", cfg.tiling.negative_keep_fraction},
                    {"rng_seed", cfg.tiling.rng_seed},
                    {"radii", radii},
                    {"radius_scale", cfg.radius_scale},
                    {"dor_threshold", cfg.dor_threshold},
                    {"conf_threshold", cfg.conf_threshold},
                    {"alpha", cfg.alpha},
                    {"class_names", cfg.class_names}};
  os << obj.dump(2) << '\n';
}

}  // namespace polokit
