#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

namespace mor {

// ---------------------------------------------------------------------------
// ClassLabel: the two moving-object classes. The id <-> name mapping is fixed.
// ---------------------------------------------------------------------------
enum class ClassLabel : int { Car = 0, HeavyVehicle = 1 };

inline constexpr int kNumClasses = 2;
inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses{ClassLabel::Car,
                                                                 ClassLabel::HeavyVehicle};

[[nodiscard]] constexpr int class_id(ClassLabel c) noexcept { return static_cast<int>(c); }
[[nodiscard]] std::string_view class_name(ClassLabel c) noexcept;
/// Throws ParseError for ids outside {0, 1}.
[[nodiscard]] ClassLabel class_from_id(int id);
[[nodiscard]] ClassLabel class_from_name(std::string_view name);

// ---------------------------------------------------------------------------
// BoundingBox: corner format, half-open pixel intervals, origin top-left.
// ---------------------------------------------------------------------------
struct BoundingBox {
  double x1{0.0};
  double y1{0.0};
  double x2{0.0};
  double y2{0.0};

  [[nodiscard]] double width() const noexcept { return x2 - x1; }
  [[nodiscard]] double height() const noexcept { return y2 - y1; }
  [[nodiscard]] double area() const noexcept { return width() * height(); }
  [[nodiscard]] double center_x() const noexcept { return 0.5 * (x1 + x2); }
  [[nodiscard]] double center_y() const noexcept { return 0.5 * (y1 + y2); }

  /// Finite coordinates with strictly positive extent.
  [[nodiscard]] bool is_valid() const noexcept;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One labeled moving object in one frame.
struct MovingObjectInstance {
  BoundingBox box;
  ClassLabel label{ClassLabel::Car};
  std::int64_t frame_index{0};

  friend bool operator==(const MovingObjectInstance&, const MovingObjectInstance&) = default;
};

/// One decoded video frame. Pixels are 8-bit BGR, as OpenCV loads them.
struct FrameRecord {
  cv::Mat pixels;
  std::int64_t index{0};
  double timestamp{0.0};

  [[nodiscard]] int width() const noexcept { return pixels.cols; }
  [[nodiscard]] int height() const noexcept { return pixels.rows; }
};

inline constexpr double kDefaultFps = 30.0;

/// A video: frames (held in memory or referenced by path) plus moving-object annotations.
///
/// Frames are either materialized in `frames` or listed in `frame_paths` and
/// decoded on demand by `frame(i)`. Indices are contiguous from 0.
struct VideoSequence {
  std::string name;
  double fps{kDefaultFps};
  cv::Size frame_size;
  std::vector<FrameRecord> frames;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<MovingObjectInstance> annotations;

  [[nodiscard]] std::size_t length() const noexcept {
    return frames.empty() ? frame_paths.size() : frames.size();
  }
  /// Returns frame `i`, decoding it from disk when only paths are held.
  [[nodiscard]] FrameRecord frame(std::size_t i) const;
  /// Annotations whose frame_index equals `i`.
  [[nodiscard]] std::vector<MovingObjectInstance> annotations_at(std::int64_t i) const;
  /// Checks contiguity of frames and that every annotation resolves to a frame.
  void validate() const;
};

}  // namespace mor
