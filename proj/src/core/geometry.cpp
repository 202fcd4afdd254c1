#include "mor/core/geometry.hpp"

#include <algorithm>

namespace mor {

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

BoundingBox clip_box(const BoundingBox& b, double width, double height) noexcept {
  return {std::clamp(b.x1, 0.0, width), std::clamp(b.y1, 0.0, height),
          std::clamp(b.x2, 0.0, width), std::clamp(b.y2, 0.0, height)};
}

bool outside_frame(const BoundingBox& b, double width, double height) noexcept {
  return b.x2 <= 0.0 || b.y2 <= 0.0 || b.x1 >= width || b.y1 >= height;
}

}  // namespace mor
