#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mor/core/types.hpp"

namespace mor::inference {

struct Detection {
  BoundingBox box;
  ClassLabel label{ClassLabel::Car};
  double score{0.0};
  std::int64_t frame_index{0};

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct InferenceConfig {
  double confidence_floor{0.05};
  int top_k_per_level{1000};
  double nms_iou{0.5};
  int max_detections_per_frame{300};

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// `<frame_index> <x1> <y1> <x2> <y2> <class_id> <score>`, fixed precision.
[[nodiscard]] std::string format_detection_line(const Detection& d);
[[nodiscard]] std::vector<Detection> parse_detection_lines(std::string_view text);
void write_detections(const std::filesystem::path& path, const std::vector<Detection>& detections);
[[nodiscard]] std::vector<Detection> read_detections(const std::filesystem::path& path);

}  // namespace mor::inference
