#include "polokit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>

#include "json_include.hpp"

namespace polokit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
  throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

class CsvReader {
 public:
  CsvReader(std::istream& is, std::string_view source) : is_(is), source_(source) {}

  /// Reads the header and returns the index of the matching variant.
  std::size_t header(std::initializer_list<std::string_view> variants) {
    std::string line;
    if (!next_line(line)) fail(source_, 1, "missing header row");
    std::size_t k = 0;
    for (auto v : variants) {
      if (line == v) return k;
      ++k;
    }
    std::string expected;
    for (auto v : variants) expected += (expected.empty() ? "'" : " or '") + std::string(v) + "'";
    fail(source_, line_, "unexpected header '" + line + "', expected " + expected);
  }

  bool row(std::vector<std::string>& fields, std::size_t expected_fields) {
    std::string line;
    while (next_line(line)) {
      if (line.empty()) continue;
      fields.clear();
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (fields.size() != expected_fields) {
        error("expected " + std::to_string(expected_fields) + " fields, found " + std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void error(const std::string& msg) const { fail(source_, line_, msg); }

  double real(const std::string& field, const char* name) const {
    double v = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
      error(std::string("invalid ") + name + " '" + field + "'");
    }
    return v;
  }

  template <typename Int>
  Int integer(const std::string& field, const char* name) const {
    Int v{};
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc() || ptr != end) error(std::string("invalid ") + name + " '" + field + "'");
    return v;
  }

  std::string identifier(const std::string& field, const char* name) const {
    if (field.empty()) error(std::string("empty ") + name);
    return field;
  }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(is_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::istream& is_;
  std::string_view source_;
  std::size_t line_ = 0;
};

void check_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r\"") != std::string::npos) {
    throw ValidationError(std::string(what) + " '" + s + "' must be non-empty and contain no comma, quote or newline");
  }
}

template <typename Record>
bool has_patch_ids(const std::vector<Record>& records) {
  if (records.empty()) return false;
  const bool first = records.front().patch_id.has_value();
  for (const auto& r : records) {
    if (r.patch_id.has_value() != first) throw ValidationError("records mix patch-level and image-level rows");
  }
  return first;
}

json parse_json(std::istream& is, std::string_view source) {
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(source) + ":" + std::to_string(e.byte) + ": malformed JSON (" + e.what() + ")");
  }
}

template <typename T>
T json_field(const json& obj, const char* key, std::string_view source, std::size_t index) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string(source) + ":" + std::to_string(index) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(source) + ":" + std::to_string(index) + ": field '" + key + "' has wrong type");
  }
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot format a non-finite number");
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_coordinate(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot format a non-finite coordinate");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

double quantize_coordinate(double v) {
  const std::string s = format_coordinate(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

// ---- labels ----------------------------------------------------------------

void write_labels(std::ostream& os, const std::vector<LabelRecord>& records) {
  const bool patches = has_patch_ids(records);
  os << (patches ? "image_id,patch_id,class_id,x,y\n" : "image_id,class_id,x,y\n");
  for (const auto& r : records) {
    check_field(r.image_id, "image_id");
    os << r.image_id << ',';
    if (patches) os << *r.patch_id << ',';
    os << r.label.class_id.value << ',' << format_coordinate(r.label.point.x) << ','
       << format_coordinate(r.label.point.y) << '\n';
  }
}

std::vector<LabelRecord> read_labels(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  const bool patches = csv.header({"image_id,class_id,x,y", "image_id,patch_id,class_id,x,y"}) == 1;
  std::vector<LabelRecord> out;
  std::vector<std::string> f;
  while (csv.row(f, patches ? 5 : 4)) {
    std::size_t k = 0;
    LabelRecord r;
    r.image_id = csv.identifier(f[k++], "image_id");
    if (patches) r.patch_id = csv.integer<int>(f[k++], "patch_id");
    r.label.class_id = ClassId(csv.integer<std::uint32_t>(f[k++], "class_id"));
    r.label.point.x = csv.real(f[k++], "x");
    r.label.point.y = csv.real(f[k++], "y");
    out.push_back(std::move(r));
  }
  return out;
}

// ---- detections ------------------------------------------------------------

void write_detections(std::ostream& os, const std::vector<DetectionRecord>& records) {
  const bool patches = has_patch_ids(records);
  os << (patches ? "image_id,patch_id,class_id,x,y,confidence\n" : "image_id,class_id,x,y,confidence\n");
  for (const auto& r : records) {
    check_field(r.image_id, "image_id");
    validate(r.detection);
    os << r.image_id << ',';
    if (patches) os << *r.patch_id << ',';
    os << r.detection.class_id.value << ',' << format_coordinate(r.detection.point.x) << ','
       << format_coordinate(r.detection.point.y) << ',' << format_number(r.detection.confidence) << '\n';
  }
}

std::vector<DetectionRecord> read_detections(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  const bool patches =
      csv.header({"image_id,class_id,x,y,confidence", "image_id,patch_id,class_id,x,y,confidence"}) == 1;
  std::vector<DetectionRecord> out;
  std::vector<std::string> f;
  while (csv.row(f, patches ? 6 : 5)) {
    std::size_t k = 0;
    DetectionRecord r;
    r.image_id = csv.identifier(f[k++], "image_id");
    if (patches) r.patch_id = csv.integer<int>(f[k++], "patch_id");
    r.detection.class_id = ClassId(csv.integer<std::uint32_t>(f[k++], "class_id"));
    r.detection.point.x = csv.real(f[k++], "x");
    r.detection.point.y = csv.real(f[k++], "y");
    r.detection.confidence = csv.real(f[k++], "confidence");
    if (r.detection.confidence < 0.0 || r.detection.confidence > 1.0) csv.error("confidence outside [0,1]");
    out.push_back(std::move(r));
  }
  return out;
}

// ---- images ----------------------------------------------------------------

void write_images(std::ostream& os, const std::vector<ImageRecord>& records) {
  os << "image_id,width,height\n";
  for (const auto& r : records) {
    check_field(r.image_id, "image_id");
    os << r.image_id << ',' << r.size.width << ',' << r.size.height << '\n';
  }
}

std::vector<ImageRecord> read_images(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  csv.header({"image_id,width,height"});
  std::vector<ImageRecord> out;
  std::set<std::string> seen;
  std::vector<std::string> f;
  while (csv.row(f, 3)) {
    ImageRecord r{csv.identifier(f[0], "image_id"), {csv.integer<int>(f[1], "width"), csv.integer<int>(f[2], "height")}};
    if (r.size.width <= 0 || r.size.height <= 0) csv.error("image dimensions must be positive");
    if (!seen.insert(r.image_id).second) csv.error("duplicate image_id '" + r.image_id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

// ---- boxes -----------------------------------------------------------------

void write_boxes(std::ostream& os, const std::vector<BoxRecord>& records) {
  const bool patches = has_patch_ids(records);
  os << (patches ? "image_id,patch_id,class_id,x_min,y_min,x_max,y_max\n"
                 : "image_id,class_id,x_min,y_min,x_max,y_max\n");
  for (const auto& r : records) {
    check_field(r.image_id, "image_id");
    os << r.image_id << ',';
    if (patches) os << *r.patch_id << ',';
    os << r.box.class_id.value << ',' << format_coordinate(r.box.x_min) << ',' << format_coordinate(r.box.y_min) << ','
       << format_coordinate(r.box.x_max) << ',' << format_coordinate(r.box.y_max) << '\n';
  }
}

std::vector<BoxRecord> read_boxes(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  const bool patches = csv.header({"image_id,class_id,x_min,y_min,x_max,y_max",
                                   "image_id,patch_id,class_id,x_min,y_min,x_max,y_max"}) == 1;
  std::vector<BoxRecord> out;
  std::vector<std::string> f;
  while (csv.row(f, patches ? 7 : 6)) {
    std::size_t k = 0;
    BoxRecord r;
    r.image_id = csv.identifier(f[k++], "image_id");
    if (patches) r.patch_id = csv.integer<int>(f[k++], "patch_id");
    r.box.class_id = ClassId(csv.integer<std::uint32_t>(f[k++], "class_id"));
    r.box.x_min = csv.real(f[k++], "x_min");
    r.box.y_min = csv.real(f[k++], "y_min");
    r.box.x_max = csv.real(f[k++], "x_max");
    r.box.y_max = csv.real(f[k++], "y_max");
    if (!(r.box.x_min < r.box.x_max && r.box.y_min < r.box.y_max)) csv.error("box has non-positive extent");
    out.push_back(std::move(r));
  }
  return out;
}

// ---- manifest --------------------------------------------------------------

void write_manifest(std::ostream& os, const std::vector<ManifestEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    check_field(e.image_id, "image_id");
    json obj = {{"image_id", e.image_id},       {"patch_id", e.window.patch_id}, {"origin_x", e.window.origin_x},
                {"origin_y", e.window.origin_y}, {"width", e.window.width},       {"height", e.window.height}};
    if (e.window.undersized) obj["undersized"] = true;
    arr.push_back(std::move(obj));
  }
  os << arr.dump(1) << '\n';
}

std::vector<ManifestEntry> read_manifest(std::istream& is, std::string_view source) {
  const json arr = parse_json(is, source);
  if (!arr.is_array()) throw ValidationError(std::string(source) + ": manifest must be a JSON array");
  std::vector<ManifestEntry> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& o = arr[k];
    ManifestEntry e;
    e.image_id = json_field<std::string>(o, "image_id", source, k);
    e.window.patch_id = json_field<int>(o, "patch_id", source, k);
    e.window.origin_x = json_field<int>(o, "origin_x", source, k);
    e.window.origin_y = json_field<int>(o, "origin_y", source, k);
    e.window.width = json_field<int>(o, "width", source, k);
    e.window.height = json_field<int>(o, "height", source, k);
    if (o.contains("undersized")) e.window.undersized = json_field<bool>(o, "undersized", source, k);
    if (e.window.width <= 0 || e.window.height <= 0 || e.window.origin_x < 0 || e.window.origin_y < 0) {
      throw ValidationError(std::string(source) + ":" + std::to_string(k) + ": invalid window geometry");
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---- activations -----------------------------------------------------------

void write_activations(std::ostream& os, const ActivationDump& dump) {
  const auto& a = dump.activations;
  a.validate();
  json obj = {{"cells_x", a.grid.cells_x},
              {"cells_y", a.grid.cells_y},
              {"stride", a.grid.stride},
              {"num_classes", a.num_classes},
              {"channels", a.channels}};
  if (dump.image_id) obj["image_id"] = *dump.image_id;
  if (dump.patch_id) obj["patch_id"] = *dump.patch_id;
  os << obj.dump() << '\n';
}

ActivationDump read_activations(std::istream& is, std::string_view source) {
  const json obj = parse_json(is, source);
  ActivationDump d;
  auto& a = d.activations;
  a.grid.cells_x = json_field<int>(obj, "cells_x", source, 0);
  a.grid.cells_y = json_field<int>(obj, "cells_y", source, 0);
  a.grid.stride = json_field<double>(obj, "stride", source, 0);
  a.num_classes = json_field<int>(obj, "num_classes", source, 0);
  a.channels = json_field<std::vector<double>>(obj, "channels", source, 0);
  if (obj.contains("image_id")) d.image_id = json_field<std::string>(obj, "image_id", source, 0);
  if (obj.contains("patch_id")) d.patch_id = json_field<int>(obj, "patch_id", source, 0);
  try {
    a.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
  return d;
}

// ---- reports ---------------------------------------------------------------

std::vector<ReportRow> report_rows(const CountReport& report, const std::vector<std::string>& class_names) {
  std::vector<ReportRow> rows;
  for (const auto& [c, s] : report.classes) {
    std::string name = c.value < class_names.size() ? class_names[c.value] : std::string();
    rows.push_back({c, std::move(name), report.num_images, s});
  }
  return rows;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "class_id,class_name,num_images,pred_count,gt_count,mae\n";
  for (const auto& r : rows) {
    if (!r.class_name.empty()) check_field(r.class_name, "class_name");
    os << r.class_id.value << ',' << r.class_name << ',' << r.num_images << ',' << r.stats.predicted_total << ','
       << r.stats.ground_truth_total << ',' << format_number(r.stats.mae) << '\n';
  }
}

std::vector<ReportRow> read_report_csv(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  csv.header({"class_id,class_name,num_images,pred_count,gt_count,mae"});
  std::vector<ReportRow> out;
  std::vector<std::string> f;
  while (csv.row(f, 6)) {
    ReportRow r;
    r.class_id = ClassId(csv.integer<std::uint32_t>(f[0], "class_id"));
    r.class_name = f[1];
    r.num_images = csv.integer<std::size_t>(f[2], "num_images");
    r.stats.predicted_total = csv.integer<std::size_t>(f[3], "pred_count");
    r.stats.ground_truth_total = csv.integer<std::size_t>(f[4], "gt_count");
    r.stats.mae = csv.real(f[5], "mae");
    out.push_back(std::move(r));
  }
  return out;
}

void write_report_json(std::ostream& os, const std::vector<ReportRow>& rows) {
  json classes = json::array();
  for (const auto& r : rows) {
    classes.push_back({{"class_id", r.class_id.value},
                       {"class_name", r.class_name},
                       {"pred_count", r.stats.predicted_total},
                       {"gt_count", r.stats.ground_truth_total},
                       {"mae", r.stats.mae}});
  }
  const std::size_t n = rows.empty() ? 0 : rows.front().num_images;
  os << json{{"num_images", n}, {"classes", classes}}.dump(2) << '\n';
}

std::vector<ReportRow> read_report_json(std::istream& is, std::string_view source) {
  const json obj = parse_json(is, source);
  const auto n = json_field<std::size_t>(obj, "num_images", source, 0);
  const auto classes = json_field<json>(obj, "classes", source, 0);
  if (!classes.is_array()) throw ValidationError(std::string(source) + ": 'classes' must be an array");
  std::vector<ReportRow> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const json& c = classes[k];
    ReportRow r;
    r.class_id = ClassId(json_field<std::uint32_t>(c, "class_id", source, k));
    r.class_name = json_field<std::string>(c, "class_name", source, k);
    r.num_images = n;
    r.stats.predicted_total = json_field<std::size_t>(c, "pred_count", source, k);
    r.stats.ground_truth_total = json_field<std::size_t>(c, "gt_count", source, k);
    r.stats.mae = json_field<double>(c, "mae", source, k);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepRow> read_sweep_csv(std::istream& is, std::string_view source) {
  CsvReader csv(is, source);
  csv.header({"class,scale,threshold,mae,pred_count"});
  std::vector<SweepRow> out;
  std::vector<std::string> f;
  while (csv.row(f, 5)) {
    out.push_back({ClassId(csv.integer<std::uint32_t>(f[0], "class")), csv.real(f[1], "scale"),
                   csv.real(f[2], "threshold"), csv.real(f[3], "mae"), csv.integer<std::size_t>(f[4], "pred_count")});
  }
  return out;
}

// ---- files -----------------------------------------------------------------

std::string read_text(const std::filesystem::path& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path == "-") {
    std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace polokit
