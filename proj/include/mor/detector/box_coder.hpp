#pragma once

#include <array>
#include <span>
#include <vector>

#include "mor/detector/anchors.hpp"

namespace mor::detector {

using BoxDeltas = std::array<double, 4>;

/// Center/size log-space parameterization with per-coordinate scaling:
///   dx = (gx - ax) / aw / vx,  dw = log(gw / aw) / vw   (same for y, h)
struct BoxCoder {
  std::array<double, 4> variances{0.1, 0.1, 0.2, 0.2};

  [[nodiscard]] BoxDeltas encode(const BoundingBox& gt, const Anchor& anchor) const;
  /// Throws NumericError for non-finite deltas. Log-size deltas are clamped to
  /// log(1000 / 16) before exponentiation.
  [[nodiscard]] BoundingBox decode(const BoxDeltas& deltas, const Anchor& anchor) const;
  /// decode() followed by clipping to [0, width] x [0, height].
  [[nodiscard]] BoundingBox decode_clipped(const BoxDeltas& deltas, const Anchor& anchor,
                                           double width, double height) const;
};

}  // namespace mor::detector
