#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "polokit/config.hpp"
#include "polokit/decode.hpp"
#include "polokit/eval.hpp"
#include "polokit/io.hpp"
#include "polokit/nms.hpp"
#include "polokit/parallel.hpp"
#include "polokit/rng.hpp"
#include "polokit/stitcher.hpp"
#include "polokit/sweep.hpp"
#include "polokit/synth.hpp"
#include "polokit/tiler.hpp"

namespace polokit::cli {

namespace {

namespace fs = std::filesystem;

template <typename T, typename Reader>
T read_file(const std::string& path, Reader reader) {
  std::istringstream in(read_text(path));
  return reader(in, path);
}

template <typename Writer>
void write_file(const std::string& path, Writer writer) {
  std::ostringstream out;
  writer(out);
  write_text_atomic(path, out.str());
}

struct CommonOptions {
  std::string config_path;
  std::optional<double> dor_threshold;
  std::optional<double> radius_scale;
  bool class_agnostic = false;

  [[nodiscard]] RunConfig load() const {
    RunConfig cfg = config_path.empty()
                        ? RunConfig::defaults()
                        : read_file<RunConfig>(config_path, [](std::istream& is, const std::string& src) {
                            return read_run_config(is, src);
                          });
    if (dor_threshold) cfg.dor_threshold = *dor_threshold;
    if (radius_scale) cfg.radius_scale = *radius_scale;
    cfg.validate();
    return cfg;
  }

  [[nodiscard]] NmsConfig nms(const RunConfig& cfg) const { return NmsConfig{cfg.dor_threshold, !class_agnostic}; }
};

void add_config_option(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "Run config JSON (defaults apply when omitted)");
}

void add_nms_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--dor-threshold", o.dor_threshold, "Override the DoR suppression threshold");
  sub->add_option("--radius-scale", o.radius_scale, "Override the radius scale");
  sub->add_flag("--class-agnostic", o.class_agnostic, "Suppress across classes");
}

std::vector<LabelRecord> load_labels(const std::string& path) {
  return read_file<std::vector<LabelRecord>>(path, [](std::istream& is, const std::string& s) { return read_labels(is, s); });
}

std::vector<DetectionRecord> load_detections(const std::string& path) {
  return read_file<std::vector<DetectionRecord>>(path,
                                                 [](std::istream& is, const std::string& s) { return read_detections(is, s); });
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  return read_file<std::vector<ManifestEntry>>(path,
                                               [](std::istream& is, const std::string& s) { return read_manifest(is, s); });
}

void check_classes(const std::vector<DetectionRecord>& dets, const RadiusTable& radii) {
  for (const auto& d : dets) {
    if (!radii.contains(d.detection.class_id)) {
      throw ValidationError("detection of image '" + d.image_id + "' has class " +
                            std::to_string(d.detection.class_id.value) + " with no configured radius");
    }
  }
}

ImageDetections group_detections(const std::vector<DetectionRecord>& records) {
  ImageDetections out;
  for (const auto& r : records) out[r.image_id].push_back(r.detection);
  return out;
}

ImageLabels group_labels(const std::vector<LabelRecord>& records) {
  ImageLabels out;
  for (const auto& r : records) out[r.image_id].push_back(r.label);
  return out;
}

// ---- tile ------------------------------------------------------------------

struct TileOptions {
  CommonOptions common;
  std::string images_path;
  std::string labels_path;
  std::string manifest_out;
  std::string patch_labels_out;
  std::string retained_out;
  std::optional<std::uint64_t> seed;
};

int cmd_tile(const TileOptions& o, std::ostream& err) {
  RunConfig cfg = o.common.load();
  if (o.seed) cfg.tiling.rng_seed = *o.seed;
  if ((!o.patch_labels_out.empty() || !o.retained_out.empty()) && o.labels_path.empty()) {
    throw ValidationError("--patch-labels and --retained require --labels");
  }
  auto images = read_file<std::vector<ImageRecord>>(o.images_path,
                                                    [](std::istream& is, const std::string& s) { return read_images(is, s); });
  std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
  for (std::size_t k = 1; k < images.size(); ++k) {
    if (images[k].image_id == images[k - 1].image_id) throw ValidationError("duplicate image id '" + images[k].image_id + "'");
  }

  ImageLabels labels;
  if (!o.labels_path.empty()) {
    labels = group_labels(load_labels(o.labels_path));
    for (const auto& [id, pts] : labels) {
      const bool known = std::binary_search(images.begin(), images.end(), ImageRecord{id, {}},
                                            [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
      if (!known) throw ValidationError("labels reference image '" + id + "' missing from the image list");
    }
  }

  struct ImageResult {
    std::vector<PatchWindow> windows;
    PatchAssignment assignment;
    std::set<int> retained;
  };
  std::vector<ImageResult> results(images.size());
  parallel_for(images.size(), [&](std::size_t k) {
    auto& r = results[k];
    r.windows = plan_patches(images[k].size, cfg.tiling);
    auto it = labels.find(images[k].image_id);
    r.assignment = assign_points_to_patches(it == labels.end() ? std::vector<LabeledPoint>{} : it->second, r.windows);
    r.retained = filter_negative_patches(r.assignment.labels, cfg.tiling.negative_keep_fraction,
                                         derive_seed(cfg.tiling.rng_seed, hash_string(images[k].image_id)));
  });

  std::vector<ManifestEntry> manifest;
  std::vector<ManifestEntry> retained;
  std::vector<LabelRecord> patch_labels;
  std::size_t outside = 0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const auto& r = results[k];
    outside += r.assignment.outside.size();
    for (const auto& w : r.windows) {
      manifest.push_back({images[k].image_id, w});
      if (r.retained.contains(w.patch_id)) retained.push_back({images[k].image_id, w});
      if (w.undersized) err << "note: image '" << images[k].image_id << "' is smaller than the patch size\n";
    }
    for (const auto& [patch_id, pts] : r.assignment.labels) {
      for (const auto& p : pts) patch_labels.push_back({images[k].image_id, patch_id, p});
    }
  }
  if (outside > 0) err << "warning: " << outside << " label(s) lie outside their image and were not assigned\n";

  write_file(o.manifest_out, [&](std::ostream& os) { write_manifest(os, manifest); });
  if (!o.patch_labels_out.empty()) write_file(o.patch_labels_out, [&](std::ostream& os) { write_labels(os, patch_labels); });
  if (!o.retained_out.empty()) write_file(o.retained_out, [&](std::ostream& os) { write_manifest(os, retained); });
  err << "tile: " << images.size() << " image(s), " << manifest.size() << " patch(es), " << retained.size()
      << " retained for training\n";
  return kExitOk;
}

// ---- boxes -----------------------------------------------------------------

struct BoxesOptions {
  CommonOptions common;
  std::string labels_path;
  std::string images_path;
  std::string manifest_path;
  std::string out;
};

int cmd_boxes(const BoxesOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  const RadiusTable radii = cfg.radius_table();
  const auto labels = load_labels(o.labels_path);
  std::map<std::string, ImageSize> sizes;
  if (!o.images_path.empty()) {
    for (const auto& r : read_file<std::vector<ImageRecord>>(
             o.images_path, [](std::istream& is, const std::string& s) { return read_images(is, s); })) {
      sizes[r.image_id] = r.size;
    }
  }
  std::vector<BoxRecord> boxes;
  if (o.manifest_path.empty()) {
    for (const auto& l : labels) {
      if (l.patch_id) throw ValidationError("boxes expects image-level labels");
      std::optional<ImageSize> size;
      if (auto it = sizes.find(l.image_id); it != sizes.end()) size = it->second;
      boxes.push_back({l.image_id, std::nullopt, box_from_point(l.label, radii, size)});
    }
  } else {
    std::map<std::string, std::vector<PatchWindow>> windows;
    for (const auto& e : load_manifest(o.manifest_path)) windows[e.image_id].push_back(e.window);
    std::size_t dropped = 0;
    for (const auto& l : labels) {
      if (l.patch_id) throw ValidationError("boxes expects image-level labels");
      auto it = windows.find(l.image_id);
      if (it == windows.end()) throw ValidationError("labels reference image '" + l.image_id + "' missing from the manifest");
      std::optional<ImageSize> size;
      if (auto s = sizes.find(l.image_id); s != sizes.end()) size = s->second;
      const Box b = box_from_point(l.label, radii, size);
      for (const auto& w : it->second) {
        if (auto clipped = clip_box_to_patch(b, w, cfg.tiling.min_box_area_fraction)) {
          boxes.push_back({l.image_id, w.patch_id, *clipped});
        } else if (b.x_max > w.origin_x && b.x_min < w.origin_x + w.width && b.y_max > w.origin_y &&
                   b.y_min < w.origin_y + w.height) {
          ++dropped;
        }
      }
    }
    std::stable_sort(boxes.begin(), boxes.end(), [](const BoxRecord& a, const BoxRecord& b) {
      return std::tie(a.image_id, *a.patch_id) < std::tie(b.image_id, *b.patch_id);
    });
    err << "boxes: " << dropped << " partial box(es) below the area fraction were dropped\n";
  }
  write_file(o.out, [&](std::ostream& os) { write_boxes(os, boxes); });
  return kExitOk;
}

// ---- decode ----------------------------------------------------------------

struct DecodeOptions {
  CommonOptions common;
  std::string activations_path;
  std::string out;
  std::optional<double> conf_threshold;
  std::optional<std::string> image_id;
  std::optional<int> patch_id;
};

int cmd_decode(const DecodeOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  const auto dump = read_file<ActivationDump>(o.activations_path,
                                              [](std::istream& is, const std::string& s) { return read_activations(is, s); });
  const double threshold = o.conf_threshold.value_or(cfg.conf_threshold);
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("--conf-threshold must lie in [0,1]");
  const std::string image = o.image_id.value_or(dump.image_id.value_or("image"));
  const std::optional<int> patch = o.patch_id ? o.patch_id : dump.patch_id;
  std::vector<DetectionRecord> records;
  for (const auto& d : decode_grid(dump.activations, threshold)) records.push_back({image, patch, d});
  write_file(o.out, [&](std::ostream& os) { write_detections(os, records); });
  err << "decode: " << records.size() << " detection(s) from " << dump.activations.grid.cell_count() << " cell(s)\n";
  return kExitOk;
}

// ---- nms -------------------------------------------------------------------

struct NmsOptions {
  CommonOptions common;
  std::string detections_path;
  std::string out;
};

int cmd_nms(const NmsOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  const RadiusTable radii = cfg.radius_table();
  const NmsConfig nms = o.common.nms(cfg);
  const auto records = load_detections(o.detections_path);
  check_classes(records, radii);

  using Key = std::pair<std::string, std::optional<int>>;
  std::map<Key, std::vector<Detection>> groups;
  for (const auto& r : records) groups[{r.image_id, r.patch_id}].push_back(r.detection);
  std::vector<std::pair<Key, std::vector<Detection>>> work(groups.begin(), groups.end());
  parallel_for(work.size(), [&](std::size_t k) { work[k].second = dor_nms(std::move(work[k].second), radii, nms); });

  std::vector<DetectionRecord> kept;
  for (const auto& [key, dets] : work) {
    for (const auto& d : dets) kept.push_back({key.first, key.second, d});
  }
  write_file(o.out, [&](std::ostream& os) { write_detections(os, kept); });
  err << "nms: kept " << kept.size() << " of " << records.size() << " detection(s)\n";
  return kExitOk;
}

// ---- stitch ----------------------------------------------------------------

struct StitchOptions {
  CommonOptions common;
  std::string detections_path;
  std::string manifest_path;
  std::string out;
  bool no_dedup = false;
};

int cmd_stitch(const StitchOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  const RadiusTable radii = cfg.radius_table();
  const NmsConfig nms = o.common.nms(cfg);
  const auto records = load_detections(o.detections_path);
  check_classes(records, radii);

  std::map<std::string, std::vector<PatchWindow>> windows;
  for (const auto& e : load_manifest(o.manifest_path)) windows[e.image_id].push_back(e.window);
  std::map<std::string, std::map<int, std::vector<Detection>>> per_image;
  for (const auto& r : records) {
    if (!r.patch_id) throw ValidationError("stitch expects patch-level detections (with a patch_id column)");
    if (!windows.contains(r.image_id)) throw ValidationError("detections reference image '" + r.image_id + "' missing from the manifest");
    per_image[r.image_id][*r.patch_id].push_back(r.detection);
  }

  struct Work {
    std::string image_id;
    std::vector<Detection> detections;
    std::size_t clamped = 0;
  };
  std::vector<Work> work;
  for (const auto& [image, patches] : per_image) work.push_back({image, {}, 0});
  parallel_for(work.size(), [&](std::size_t k) {
    MergeResult merged = merge_patch_detections(per_image.at(work[k].image_id), windows.at(work[k].image_id));
    work[k].clamped = merged.clamped.size();
    work[k].detections = o.no_dedup ? std::move(merged.detections) : deduplicate(std::move(merged.detections), radii, nms);
  });

  std::vector<DetectionRecord> out;
  std::size_t clamped = 0;
  for (const auto& w : work) {
    clamped += w.clamped;
    for (const auto& d : w.detections) out.push_back({w.image_id, std::nullopt, d});
  }
  write_file(o.out, [&](std::ostream& os) { write_detections(os, out); });
  if (clamped > 0) err << "note: " << clamped << " detection(s) clamped onto the image border\n";
  err << "stitch: " << records.size() << " patch detection(s) -> " << out.size() << " image detection(s)\n";
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
  CommonOptions common;
  std::string detections_path;
  std::string labels_path;
  std::string csv_out;
  std::string json_out;
  std::optional<double> match_dor;
};

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  const auto dets = load_detections(o.detections_path);
  const auto labels = load_labels(o.labels_path);
  const ImageDetections preds = group_detections(dets);
  const ImageLabels gts = group_labels(labels);
  std::set<ClassId> classes;
  for (const auto& [c, r] : cfg.radii) classes.insert(c);
  const auto rows = report_rows(mae_per_class(preds, gts, classes), cfg.class_names);

  if (!o.csv_out.empty()) write_file(o.csv_out, [&](std::ostream& os) { write_report_csv(os, rows); });
  if (!o.json_out.empty()) write_file(o.json_out, [&](std::ostream& os) { write_report_json(os, rows); });
  if (o.csv_out.empty() && o.json_out.empty()) write_report_csv(out, rows);

  if (o.match_dor) {
    const RadiusTable radii = cfg.radius_table();
    std::size_t tp = 0, fp = 0, fn = 0;
    std::set<std::string> images;
    for (const auto& [id, d] : preds) images.insert(id);
    for (const auto& [id, l] : gts) images.insert(id);
    for (const auto& id : images) {
      const auto p = preds.find(id);
      const auto g = gts.find(id);
      const auto m = match_detections(p == preds.end() ? std::vector<Detection>{} : p->second,
                                      g == gts.end() ? std::vector<LabeledPoint>{} : g->second, radii, *o.match_dor);
      tp += m.true_positives;
      fp += m.false_positives;
      fn += m.false_negatives;
    }
    err << "match: TP " << tp << " FP " << fp << " FN " << fn << " at DoR <= " << format_number(*o.match_dor) << '\n';
  }
  for (const auto& r : rows) {
    err << "eval: class " << r.class_id.value << (r.class_name.empty() ? "" : " (" + r.class_name + ")") << " MAE "
        << format_number(r.stats.mae) << '\n';
  }
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  CommonOptions common;
  std::string detections_path;
  std::string labels_path;
  std::string out;
  std::vector<double> scales;
  std::vector<double> thresholds;
};

int cmd_sweep(const SweepOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  // Swept scales multiply the base radii directly.
  const RadiusTable base = RadiusTable(cfg.radii, 1.0);
  const auto dets = load_detections(o.detections_path);
  check_classes(dets, base);
  SweepConfig sweep = SweepConfig::defaults();
  if (!o.scales.empty()) sweep.radius_scales = o.scales;
  if (!o.thresholds.empty()) sweep.dor_thresholds = o.thresholds;
  sweep.class_aware = !o.common.class_agnostic;
  const SweepResult result = run_sweep(group_detections(dets), group_labels(load_labels(o.labels_path)), base, sweep);
  write_file(o.out, [&](std::ostream& os) { write_sweep_csv(os, result); });
  err << "sweep: " << result.num_scales << " scale(s) x " << result.num_thresholds << " threshold(s)\n";
  return kExitOk;
}

// ---- synth -----------------------------------------------------------------

struct SynthOptions {
  CommonOptions common;
  std::uint64_t seed = 0;
  std::size_t num_images = 1;
  int width = 8688;
  int height = 5792;
  std::vector<std::size_t> abundance;
  std::size_t clusters = 8;
  double spread = 400.0;
  std::optional<double> min_separation;
  DetectorNoise noise;
  std::string labels_out;
  std::string detections_out;
  std::string images_out;
};

int cmd_synth(const SynthOptions& o, std::ostream& err) {
  const RunConfig cfg = o.common.load();
  if (o.labels_out.empty() && o.detections_out.empty() && o.images_out.empty()) {
    throw ValidationError("synth needs at least one of --labels-out, --detections-out, --images-out");
  }
  std::vector<std::size_t> abundance = o.abundance;
  if (abundance.empty()) abundance.assign(cfg.class_names.empty() ? 1 : cfg.class_names.size(), 100);

  std::vector<ImageRecord> images;
  for (std::size_t k = 0; k < o.num_images; ++k) {
    char id[32];
    std::snprintf(id, sizeof id, "synth_%04zu", k);
    images.push_back({id, {o.width, o.height}});
  }
  std::vector<std::vector<LabeledPoint>> scenes(images.size());
  std::vector<std::vector<Detection>> detections(images.size());
  parallel_for(images.size(), [&](std::size_t k) {
    SceneConfig scene;
    scene.image = images[k].size;
    scene.abundance = abundance;
    scene.cluster_count = o.clusters;
    scene.cluster_spread = o.spread;
    scene.min_separation = o.min_separation;
    scene.rng_seed = derive_seed(o.seed, 2 * k);
    scenes[k] = generate_scene(scene);
    DetectorNoise noise = o.noise;
    noise.rng_seed = derive_seed(o.seed, 2 * k + 1);
    detections[k] = simulate_detector(scenes[k], images[k].size, noise);
  });

  std::vector<LabelRecord> labels;
  std::vector<DetectionRecord> dets;
  for (std::size_t k = 0; k < images.size(); ++k) {
    for (const auto& p : scenes[k]) labels.push_back({images[k].image_id, std::nullopt, p});
    for (const auto& d : detections[k]) dets.push_back({images[k].image_id, std::nullopt, d});
  }
  if (!o.labels_out.empty()) write_file(o.labels_out, [&](std::ostream& os) { write_labels(os, labels); });
  if (!o.detections_out.empty()) write_file(o.detections_out, [&](std::ostream& os) { write_detections(os, dets); });
  if (!o.images_out.empty()) write_file(o.images_out, [&](std::ostream& os) { write_images(os, images); });
  err << "synth: " << images.size() << " image(s), " << labels.size() << " label(s), " << dets.size()
      << " detection(s)\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-label detection toolkit: tiling, decoding, DoR NMS, stitching, counting evaluation"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  TileOptions tile;
  auto* tile_cmd = app.add_subcommand("tile", "Plan overlapping patches and move labels into patch frames");
  add_config_option(tile_cmd, tile.common);
  tile_cmd->add_option("--images", tile.images_path, "Image size CSV (image_id,width,height)")->required();
  tile_cmd->add_option("--labels", tile.labels_path, "Image-level label CSV");
  tile_cmd->add_option("--manifest", tile.manifest_out, "Output patch manifest JSON (all windows)")->required();
  tile_cmd->add_option("--patch-labels", tile.patch_labels_out, "Output patch-frame label CSV");
  tile_cmd->add_option("--retained", tile.retained_out, "Output manifest of patches kept for training");
  tile_cmd->add_option("--seed", tile.seed, "Seed for negative-patch sampling");

  BoxesOptions boxes;
  auto* boxes_cmd = app.add_subcommand("boxes", "Convert point labels to square pseudo-boxes");
  add_config_option(boxes_cmd, boxes.common);
  boxes_cmd->add_option("--radius-scale", boxes.common.radius_scale, "Override the radius scale");
  boxes_cmd->add_option("--labels", boxes.labels_path, "Image-level label CSV")->required();
  boxes_cmd->add_option("--images", boxes.images_path, "Image size CSV; boxes are clipped to the image");
  boxes_cmd->add_option("--manifest", boxes.manifest_path, "Patch manifest; emit patch-frame boxes with the area rule");
  boxes_cmd->add_option("--out", boxes.out, "Output box CSV")->required();

  DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand("decode", "Decode an activation dump into detections");
  add_config_option(decode_cmd, decode.common);
  decode_cmd->add_option("--activations", decode.activations_path, "Activation dump JSON")->required();
  decode_cmd->add_option("--out", decode.out, "Output detection CSV")->required();
  decode_cmd->add_option("--conf-threshold", decode.conf_threshold, "Override the confidence threshold");
  decode_cmd->add_option("--image-id", decode.image_id, "Image id for the output rows");
  decode_cmd->add_option("--patch-id", decode.patch_id, "Patch id; produces a patch-level CSV");

  NmsOptions nms;
  auto* nms_cmd = app.add_subcommand("nms", "DoR non-maximum suppression per image (and patch)");
  add_config_option(nms_cmd, nms.common);
  add_nms_options(nms_cmd, nms.common);
  nms_cmd->add_option("--detections", nms.detections_path, "Detection CSV")->required();
  nms_cmd->add_option("--out", nms.out, "Output detection CSV")->required();

  StitchOptions stitch;
  auto* stitch_cmd = app.add_subcommand("stitch", "Map patch detections to image frame and deduplicate overlaps");
  add_config_option(stitch_cmd, stitch.common);
  add_nms_options(stitch_cmd, stitch.common);
  stitch_cmd->add_option("--detections", stitch.detections_path, "Patch-level detection CSV")->required();
  stitch_cmd->add_option("--manifest", stitch.manifest_path, "Patch manifest JSON")->required();
  stitch_cmd->add_option("--out", stitch.out, "Output image-level detection CSV")->required();
  stitch_cmd->add_flag("--no-dedup", stitch.no_dedup, "Skip the image-level suppression round");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Per-class counts and MAE per image");
  add_config_option(eval_cmd, eval.common);
  eval_cmd->add_option("--detections", eval.detections_path, "Image-level detection CSV")->required();
  eval_cmd->add_option("--labels", eval.labels_path, "Image-level label CSV")->required();
  eval_cmd->add_option("--csv", eval.csv_out, "Output report CSV");
  eval_cmd->add_option("--json", eval.json_out, "Output report JSON");
  eval_cmd->add_option("--match-dor", eval.match_dor, "Also report TP/FP/FN under greedy DoR matching");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid search over radius scale and DoR threshold");
  add_config_option(sweep_cmd, sweep.common);
  sweep_cmd->add_flag("--class-agnostic", sweep.common.class_agnostic, "Suppress across classes");
  sweep_cmd->add_option("--detections", sweep.detections_path, "Raw (pre-NMS) image-level detection CSV")->required();
  sweep_cmd->add_option("--labels", sweep.labels_path, "Image-level label CSV")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output long-format grid CSV")->required();
  sweep_cmd->add_option("--scales", sweep.scales, "Radius scales (default 0.25..2 step 0.25)")->delimiter(',');
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "DoR thresholds (default 0.1..1 step 0.1)")->delimiter(',');

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic scenes and simulated detections");
  add_config_option(synth_cmd, synth.common);
  synth_cmd->add_option("--seed", synth.seed, "Master seed");
  synth_cmd->add_option("--num-images", synth.num_images, "Number of scenes")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--width", synth.width, "Image width")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--height", synth.height, "Image height")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--abundance", synth.abundance, "Points per class, e.g. 200,40,10")->delimiter(',');
  synth_cmd->add_option("--clusters", synth.clusters, "Flock count");
  synth_cmd->add_option("--spread", synth.spread, "Flock spread sigma in pixels");
  synth_cmd->add_option("--min-separation", synth.min_separation, "Minimum distance between any two points");
  synth_cmd->add_option("--jitter", synth.noise.jitter_sigma, "Detector jitter sigma in pixels");
  synth_cmd->add_option("--miss-rate", synth.noise.miss_rate, "Probability a bird is missed");
  synth_cmd->add_option("--duplicate-rate", synth.noise.duplicate_rate, "Probability a detection is duplicated");
  synth_cmd->add_option("--fp-rate", synth.noise.false_positive_rate, "False positives per ground truth");
  synth_cmd->add_option("--labels-out", synth.labels_out, "Output label CSV");
  synth_cmd->add_option("--detections-out", synth.detections_out, "Output detection CSV");
  synth_cmd->add_option("--images-out", synth.images_out, "Output image size CSV");

  std::uint64_t loss_seed = 7;
  std::size_t loss_instances = 100;
  auto* loss_cmd = app.add_subcommand("loss-check", "Loss unit values and finite-difference gradient checks");
  loss_cmd->add_option("--seed", loss_seed, "Seed for random instances");
  loss_cmd->add_option("--instances", loss_instances, "Random instances per gradient check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*tile_cmd) return cmd_tile(tile, err);
    if (*boxes_cmd) return cmd_boxes(boxes, err);
    if (*decode_cmd) return cmd_decode(decode, err);
    if (*nms_cmd) return cmd_nms(nms, err);
    if (*stitch_cmd) return cmd_stitch(stitch, err);
    if (*eval_cmd) return cmd_eval(eval, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, err);
    if (*synth_cmd) return cmd_synth(synth, err);
    if (*loss_cmd) return run_loss_check(out, loss_seed, loss_instances) ? kExitOk : kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace polokit::cli
