#pragma once

#include "mor/core/types.hpp"

namespace mor {

/// Intersection-over-union of two boxes; 0 when disjoint.
[[nodiscard]] double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

[[nodiscard]] double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Clips to [0, width] x [0, height]. The result may be degenerate.
[[nodiscard]] BoundingBox clip_box(const BoundingBox& b, double width, double height) noexcept;

/// True when the box lies entirely outside the frame (no positive-area overlap).
[[nodiscard]] bool outside_frame(const BoundingBox& b, double width, double height) noexcept;

}  // namespace mor
