#pragma once

// Readers and writers for the toolkit's file formats.
//
//   labels      image_id,class_id,x,y              (patch files: image_id,patch_id,class_id,x,y)
//   detections  image_id,class_id,x,y,confidence   (patch files: image_id,patch_id,class_id,x,y,confidence)
//   images      image_id,width,height
//   boxes       image_id,class_id,x_min,y_min,x_max,y_max  (patch files insert patch_id)
//   report      class_id,class_name,num_images,pred_count,gt_count,mae  / JSON
//   sweep       class,scale,threshold,mae,pred_count
//   manifest    JSON array of {image_id, patch_id, origin_x, origin_y, width, height[, undersized]}
//   activations JSON {cells_x, cells_y, stride, num_classes, channels[, image_id, patch_id]}
//
// CSV is UTF-8 with LF line endings and a mandatory header row. Coordinates
// are written with at most 4 fractional digits; other reals use the shortest
// representation that reads back to the same double. Readers reject malformed
// input with "<source>:<line>: message" diagnostics (ValidationError).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polokit/core.hpp"
#include "polokit/decode.hpp"
#include "polokit/eval.hpp"
#include "polokit/sweep.hpp"
#include "polokit/tiler.hpp"

namespace polokit {

struct LabelRecord {
  std::string image_id;
  std::optional<int> patch_id;
  LabeledPoint label;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

struct DetectionRecord {
  std::string image_id;
  std::optional<int> patch_id;
  Detection detection;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct ImageRecord {
  std::string image_id;
  ImageSize size;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct BoxRecord {
  std::string image_id;
  std::optional<int> patch_id;
  Box box;

  friend bool operator==(const BoxRecord&, const BoxRecord&) = default;
};

struct ManifestEntry {
  std::string image_id;
  PatchWindow window;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ActivationDump {
  ActivationGrid activations;
  std::optional<std::string> image_id;
  std::optional<int> patch_id;
};

struct ReportRow {
  ClassId class_id;
  std::string class_name;
  std::size_t num_images = 0;
  ClassCountStats stats;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct SweepRow {
  ClassId class_id;
  double scale = 0.0;
  double threshold = 0.0;
  double mae = 0.0;
  std::size_t pred_count = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Shortest round-trip decimal for a finite double.
[[nodiscard]] std::string format_number(double v);
/// Fixed 4 fractional digits with trailing zeros trimmed ("12.5", "3", "-0.25").
[[nodiscard]] std::string format_coordinate(double v);
/// The value a coordinate takes after a write/read cycle.
[[nodiscard]] double quantize_coordinate(double v);

void write_labels(std::ostream& os, const std::vector<LabelRecord>& records);
[[nodiscard]] std::vector<LabelRecord> read_labels(std::istream& is, std::string_view source = "<labels>");

void write_detections(std::ostream& os, const std::vector<DetectionRecord>& records);
[[nodiscard]] std::vector<DetectionRecord> read_detections(std::istream& is, std::string_view source = "<detections>");

void write_images(std::ostream& os, const std::vector<ImageRecord>& records);
[[nodiscard]] std::vector<ImageRecord> read_images(std::istream& is, std::string_view source = "<images>");

void write_boxes(std::ostream& os, const std::vector<BoxRecord>& records);
[[nodiscard]] std::vector<BoxRecord> read_boxes(std::istream& is, std::string_view source = "<boxes>");

void write_manifest(std::ostream& os, const std::vector<ManifestEntry>& entries);
[[nodiscard]] std::vector<ManifestEntry> read_manifest(std::istream& is, std::string_view source = "<manifest>");

void write_activations(std::ostream& os, const ActivationDump& dump);
[[nodiscard]] ActivationDump read_activations(std::istream& is, std::string_view source = "<activations>");

/// class_names[id] labels a class when present; otherwise the name is empty.
[[nodiscard]] std::vector<ReportRow> report_rows(const CountReport& report, const std::vector<std::string>& class_names);
void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);
[[nodiscard]] std::vector<ReportRow> read_report_csv(std::istream& is, std::string_view source = "<report>");
void write_report_json(std::ostream& os, const std::vector<ReportRow>& rows);
[[nodiscard]] std::vector<ReportRow> read_report_json(std::istream& is, std::string_view source = "<report>");

[[nodiscard]] std::vector<SweepRow> read_sweep_csv(std::istream& is, std::string_view source = "<sweep>");

/// Whole-file read; "-" reads standard input. Throws IoError.
[[nodiscard]] std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`; "-" writes
/// to standard output. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace polokit
