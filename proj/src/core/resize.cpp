#include "mor/core/resize.hpp"

#include <opencv2/imgproc.hpp>

#include "mor/error.hpp"

namespace mor {

std::vector<MovingObjectInstance> rescale_boxes(const std::vector<MovingObjectInstance>& annotations,
                                                cv::Size from, cv::Size to, std::size_t* dropped) {
  if (from.width <= 0 || from.height <= 0 || to.width <= 0 || to.height <= 0) {
    throw Error("resize dimensions must be positive");
  }
  const double sx = static_cast<double>(to.width) / from.width;
  const double sy = static_cast<double>(to.height) / from.height;
  std::vector<MovingObjectInstance> out;
  out.reserve(annotations.size());
  std::size_t n_dropped = 0;
  for (auto a : annotations) {
    a.box = {a.box.x1 * sx, a.box.y1 * sy, a.box.x2 * sx, a.box.y2 * sy};
    if (a.box.width() < 1.0 || a.box.height() < 1.0) {
      ++n_dropped;
      continue;
    }
    out.push_back(a);
  }
  if (dropped) *dropped = n_dropped;
  return out;
}

ResizeResult resize_with_boxes(const FrameRecord& frame,
                               const std::vector<MovingObjectInstance>& annotations,
                               cv::Size target) {
  ResizeResult r;
  r.annotations = rescale_boxes(annotations, frame.pixels.size(), target, &r.dropped);
  r.frame.index = frame.index;
  r.frame.timestamp = frame.timestamp;
  if (frame.pixels.size() == target) {
    r.frame.pixels = frame.pixels;
  } else {
    const bool shrinking = target.area() < frame.pixels.size().area();
    cv::resize(frame.pixels, r.frame.pixels, target, 0, 0,
               shrinking ? cv::INTER_AREA : cv::INTER_LINEAR);
  }
  return r;
}

}  // namespace mor
