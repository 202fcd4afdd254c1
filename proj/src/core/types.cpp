#include "mor/core/types.hpp"

#include <cmath>

#include <opencv2/imgcodecs.hpp>

#include "mor/error.hpp"

namespace mor {

std::string_view class_name(ClassLabel c) noexcept {
  switch (c) {
    case ClassLabel::Car:
      return "car";
    case ClassLabel::HeavyVehicle:
      return "heavy_vehicle";
  }
  return "unknown";
}

ClassLabel class_from_id(int id) {
  if (id < 0 || id >= kNumClasses) {
    throw ParseError("unknown class id " + std::to_string(id));
  }
  return static_cast<ClassLabel>(id);
}

ClassLabel class_from_name(std::string_view name) {
  for (auto c : kAllClasses) {
    if (class_name(c) == name) return c;
  }
  throw ParseError("unknown class name '" + std::string(name) + "'");
}

bool BoundingBox::is_valid() const noexcept {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         x1 < x2 && y1 < y2;
}

FrameRecord VideoSequence::frame(std::size_t i) const {
  if (!frames.empty()) {
    if (i >= frames.size()) throw Error("frame index out of range: " + std::to_string(i));
    return frames[i];
  }
  if (i >= frame_paths.size()) throw Error("frame index out of range: " + std::to_string(i));
  FrameRecord rec;
  rec.pixels = cv::imread(frame_paths[i].string(), cv::IMREAD_COLOR);
  if (rec.pixels.empty()) throw Error("cannot decode frame " + frame_paths[i].string());
  rec.index = static_cast<std::int64_t>(i);
  rec.timestamp = static_cast<double>(i) / fps;
  return rec;
}

std::vector<MovingObjectInstance> VideoSequence::annotations_at(std::int64_t i) const {
  std::vector<MovingObjectInstance> out;
  for (const auto& a : annotations) {
    if (a.frame_index == i) out.push_back(a);
  }
  return out;
}

void VideoSequence::validate() const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].index != static_cast<std::int64_t>(i)) {
      throw Error(name + ": frame indices are not contiguous at position " + std::to_string(i));
    }
  }
  const auto n = static_cast<std::int64_t>(length());
  for (const auto& a : annotations) {
    if (a.frame_index < 0 || a.frame_index >= n) {
      throw Error(name + ": annotation references missing frame " + std::to_string(a.frame_index));
    }
    if (!a.box.is_valid()) throw Error(name + ": degenerate annotation box");
  }
}

}  // namespace mor
