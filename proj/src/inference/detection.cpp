#include "mor/inference/detection.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mor/error.hpp"

namespace mor::inference {

void InferenceConfig::validate() const {
  if (!(confidence_floor >= 0.0 && confidence_floor <= 1.0)) {
    throw ConfigError("infer.confidence_floor must lie in [0, 1]");
  }
  if (top_k_per_level < 1) throw ConfigError("infer.top_k_per_level must be >= 1");
  if (!(nms_iou > 0.0 && nms_iou < 1.0)) throw ConfigError("infer.nms_iou must lie in (0, 1)");
  if (max_detections_per_frame < 1) throw ConfigError("infer.max_detections_per_frame must be >= 1");
}

std::string format_detection_line(const Detection& d) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%lld %.3f %.3f %.3f %.3f %d %.6f",
                static_cast<long long>(d.frame_index), d.box.x1, d.box.y1, d.box.x2, d.box.y2,
                class_id(d.label), d.score);
  return buf;
}

std::vector<Detection> parse_detection_lines(std::string_view text) {
  std::vector<Detection> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    long long frame = 0;
    int cls = 0;
    Detection d;
    if (!(ls >> frame >> d.box.x1 >> d.box.y1 >> d.box.x2 >> d.box.y2 >> cls >> d.score)) {
      throw ParseError("malformed detection record", lineno);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing fields in detection record", lineno);
    d.frame_index = frame;
    d.label = class_from_id(cls);
    out.push_back(d);
  }
  return out;
}

void write_detections(const std::filesystem::path& path, const std::vector<Detection>& detections) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write detections to " + path.string());
  for (const auto& d : detections) out << format_detection_line(d) << '\n';
}

std::vector<Detection> read_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read detections from " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_detection_lines(ss.str());
}

}  // namespace mor::inference
