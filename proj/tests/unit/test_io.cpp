#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "polokit/io.hpp"

namespace polokit {
namespace {

template <typename Write, typename Read>
auto round_trip(Write write, Read read) {
  std::ostringstream os;
  write(os);
  std::istringstream is(os.str());
  return read(is);
}

std::string error_of(const std::string& text, auto read) {
  std::istringstream is(text);
  try {
    (void)read(is);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.105360515657826), "0.105360515657826");
  EXPECT_EQ(format_coordinate(12.5), "12.5");
  EXPECT_EQ(format_coordinate(3.0), "3");
  EXPECT_EQ(format_coordinate(-0.25), "-0.25");
  EXPECT_EQ(format_coordinate(1.23456), "1.2346");
  EXPECT_EQ(format_coordinate(-0.00001), "0");
  EXPECT_EQ(quantize_coordinate(1.23456), 1.2346);
}

TEST(Labels, RoundTripQuantized) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 8688);
  std::vector<LabelRecord> recs;
  for (int i = 0; i < 500; ++i) recs.push_back({"img" + std::to_string(i % 7), std::nullopt, {{u(gen), u(gen)}, ClassId(i % 5)}});
  const auto back = round_trip([&](std::ostream& os) { write_labels(os, recs); },
                               [](std::istream& is) { return read_labels(is); });
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].image_id, recs[i].image_id);
    EXPECT_EQ(back[i].label.class_id, recs[i].label.class_id);
    EXPECT_EQ(back[i].label.point.x, quantize_coordinate(recs[i].label.point.x));
    EXPECT_EQ(back[i].label.point.y, quantize_coordinate(recs[i].label.point.y));
  }
  // Quantized data is a fixed point.
  const auto again = round_trip([&](std::ostream& os) { write_labels(os, back); },
                                [](std::istream& is) { return read_labels(is); });
  EXPECT_EQ(again, back);
}

TEST(Labels, PatchVariantAndHeader) {
  const std::vector<LabelRecord> recs{{"a", 3, {{1.5, 2}, ClassId(1)}}};
  std::ostringstream os;
  write_labels(os, recs);
  EXPECT_EQ(os.str(), "image_id,patch_id,class_id,x,y\na,3,1,1.5,2\n");
  std::istringstream is(os.str());
  EXPECT_EQ(read_labels(is), recs);
}

TEST(Labels, Diagnostics) {
  auto rd = [](std::istream& is) { return read_labels(is, "labels.csv"); };
  EXPECT_NE(error_of("image_id,class_id,x,y\na,0,1,2\nb,0,oops,2\n", rd).find("labels.csv:3"), std::string::npos);
  EXPECT_NE(error_of("image_id,class_id,x,y\na,0,nan,2\n", rd).find("labels.csv:2"), std::string::npos);
  EXPECT_NE(error_of("image_id,class_id,x,y\na,0,1\n", rd).find("labels.csv:2"), std::string::npos);
  EXPECT_NE(error_of("id,cls,x,y\n", rd).find("labels.csv:1"), std::string::npos);
  EXPECT_NE(error_of("", rd), "");
  std::istringstream crlf("image_id,class_id,x,y\r\na,0,1,2\r\n");
  EXPECT_EQ(read_labels(crlf).size(), 1u);
}

TEST(Detections, RoundTripKeepsConfidence) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<DetectionRecord> recs;
  for (int i = 0; i < 300; ++i) {
    recs.push_back({"x", i % 2 ? std::optional<int>(i) : std::nullopt, {{100 * u(gen), 100 * u(gen)}, ClassId(i % 3), u(gen)}});
  }
  // Mixed patch/no-patch records cannot share one header; split them.
  std::vector<DetectionRecord> plain, patched;
  for (const auto& r : recs) (r.patch_id ? patched : plain).push_back(r);
  for (const auto* set : {&plain, &patched}) {
    const auto back = round_trip([&](std::ostream& os) { write_detections(os, *set); },
                                 [](std::istream& is) { return read_detections(is); });
    ASSERT_EQ(back.size(), set->size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].patch_id, (*set)[i].patch_id);
      EXPECT_EQ(back[i].detection.confidence, (*set)[i].detection.confidence);
      EXPECT_EQ(back[i].detection.point.x, quantize_coordinate((*set)[i].detection.point.x));
    }
  }
}

TEST(Detections, RejectsBadConfidence) {
  auto rd = [](std::istream& is) { return read_detections(is, "d.csv"); };
  EXPECT_NE(error_of("image_id,class_id,x,y,confidence\na,0,1,2,1.5\n", rd).find("d.csv:2"), std::string::npos);
}

TEST(Images, RoundTripAndValidation) {
  const std::vector<ImageRecord> recs{{"a", {8688, 5792}}, {"b", {640, 480}}};
  EXPECT_EQ(round_trip([&](std::ostream& os) { write_images(os, recs); }, [](std::istream& is) { return read_images(is); }),
            recs);
  auto rd = [](std::istream& is) { return read_images(is, "i.csv"); };
  EXPECT_NE(error_of("image_id,width,height\na,0,10\n", rd).find("i.csv:2"), std::string::npos);
  EXPECT_NE(error_of("image_id,width,height\na,10,10\na,10,10\n", rd), "");
}

TEST(Boxes, RoundTrip) {
  const std::vector<BoxRecord> recs{{"a", std::nullopt, {ClassId(0), 10, 20, 90, 100}}};
  EXPECT_EQ(round_trip([&](std::ostream& os) { write_boxes(os, recs); }, [](std::istream& is) { return read_boxes(is); }),
            recs);
  const std::vector<BoxRecord> patched{{"a", 4, {ClassId(2), 0, 0, 12.5, 640}}};
  EXPECT_EQ(round_trip([&](std::ostream& os) { write_boxes(os, patched); }, [](std::istream& is) { return read_boxes(is); }),
            patched);
}

TEST(Manifest, RoundTrip) {
  const std::vector<ManifestEntry> entries{{"a", {0, 0, 640, 640, 0, false}}, {"a", {576, 0, 300, 640, 1, true}}};
  const auto back = round_trip([&](std::ostream& os) { write_manifest(os, entries); },
                               [](std::istream& is) { return read_manifest(is); });
  EXPECT_EQ(back, entries);
  auto rd = [](std::istream& is) { return read_manifest(is, "m.json"); };
  EXPECT_NE(error_of("{not json", rd).find("m.json"), std::string::npos);
  EXPECT_NE(error_of(R"([{"image_id":"a","patch_id":0,"origin_x":0,"origin_y":0,"width":-1,"height":5}])", rd), "");
}

TEST(Activations, RoundTrip) {
  ActivationDump dump;
  dump.activations.grid = {2, 1, 32};
  dump.activations.num_classes = 2;
  dump.activations.channels = {0.1, -0.2, 3, -4, 0.5, 0.25, 1e-3, 7};
  dump.image_id = "img";
  dump.patch_id = 9;
  const auto back = round_trip([&](std::ostream& os) { write_activations(os, dump); },
                               [](std::istream& is) { return read_activations(is); });
  EXPECT_EQ(back.activations.channels, dump.activations.channels);
  EXPECT_EQ(back.activations.grid.cells_x, 2);
  EXPECT_EQ(back.activations.grid.stride, 32.0);
  EXPECT_EQ(back.image_id, dump.image_id);
  EXPECT_EQ(back.patch_id, dump.patch_id);

  auto bad = dump;
  bad.activations.channels.pop_back();
  std::ostringstream os;
  EXPECT_THROW(write_activations(os, bad), ValidationError);
}

TEST(Report, CsvAndJsonRoundTrip) {
  CountReport report;
  report.num_images = 3;
  report.classes[ClassId(0)] = {10, 12, 2.0 / 3.0};
  report.classes[ClassId(2)] = {5, 5, 0.0};
  report.classes[ClassId(7)] = {1, 0, 1.0 / 3.0};
  const auto rows = report_rows(report, {"Brant goose", "Canada goose", "Gull"});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].class_name, "Gull");
  EXPECT_EQ(rows[2].class_name, "");
  EXPECT_EQ(round_trip([&](std::ostream& os) { write_report_csv(os, rows); },
                       [](std::istream& is) { return read_report_csv(is); }),
            rows);
  EXPECT_EQ(round_trip([&](std::ostream& os) { write_report_json(os, rows); },
                       [](std::istream& is) { return read_report_json(is); }),
            rows);
}

TEST(Files, AtomicWriteAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "polokit_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_text_atomic(path, "hello\n");
  EXPECT_EQ(read_text(path), "hello\n");
  write_text_atomic(path, "again\n");
  EXPECT_EQ(read_text(path), "again\n");
  EXPECT_THROW((void)read_text(dir / "missing.csv"), IoError);
  EXPECT_THROW(write_text_atomic(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace polokit
