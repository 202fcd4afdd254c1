#pragma once

#include <vector>

#include "mor/core/types.hpp"

namespace mor {

struct ResizeResult {
  FrameRecord frame;
  std::vector<MovingObjectInstance> annotations;
  /// Boxes dropped because an extent fell below one pixel.
  std::size_t dropped{0};
};

/// Resizes the frame and rescales boxes by (target.width / W, target.height / H).
[[nodiscard]] ResizeResult resize_with_boxes(const FrameRecord& frame,
                                             const std::vector<MovingObjectInstance>& annotations,
                                             cv::Size target);

/// Box-only part of resize_with_boxes, for callers without pixels.
[[nodiscard]] std::vector<MovingObjectInstance> rescale_boxes(
    const std::vector<MovingObjectInstance>& annotations, cv::Size from, cv::Size to,
    std::size_t* dropped = nullptr);

}  // namespace mor
