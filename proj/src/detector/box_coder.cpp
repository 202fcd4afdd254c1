#include "mor/detector/box_coder.hpp"

#include <algorithm>
#include <cmath>

#include "mor/core/geometry.hpp"
#include "mor/error.hpp"

namespace mor::detector {
namespace {
const double kMaxLogScale = std::log(1000.0 / 16.0);
}

BoxDeltas BoxCoder::encode(const BoundingBox& gt, const Anchor& a) const {
  return {(gt.center_x() - a.cx) / a.w / variances[0], (gt.center_y() - a.cy) / a.h / variances[1],
          std::log(gt.width() / a.w) / variances[2], std::log(gt.height() / a.h) / variances[3]};
}

BoundingBox BoxCoder::decode(const BoxDeltas& d, const Anchor& a) const {
  for (double v : d) {
    if (!std::isfinite(v)) throw NumericError("non-finite box delta");
  }
  const double cx = a.cx + d[0] * variances[0] * a.w;
  const double cy = a.cy + d[1] * variances[1] * a.h;
  const double w = a.w * std::exp(std::min(d[2] * variances[2], kMaxLogScale));
  const double h = a.h * std::exp(std::min(d[3] * variances[3], kMaxLogScale));
  return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

BoundingBox BoxCoder::decode_clipped(const BoxDeltas& deltas, const Anchor& anchor, double width,
                                     double height) const {
  return clip_box(decode(deltas, anchor), width, height);
}

}  // namespace mor::detector
