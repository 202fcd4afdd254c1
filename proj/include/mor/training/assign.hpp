#pragma once

#include <vector>

#include "mor/core/types.hpp"
#include "mor/detector/anchors.hpp"

namespace mor::training {

/// Per-anchor training target.
struct AnchorTarget {
  static constexpr int kIgnore = -2;
  static constexpr int kNegative = -1;

  /// Class id for positives, kNegative or kIgnore.
  int label{kNegative};
  /// Index of the matched ground-truth instance (positives only), else -1.
  int gt_index{-1};
  /// Best IoU against any ground truth (0 when there is none).
  double max_iou{0.0};

  [[nodiscard]] bool positive() const noexcept { return label >= 0; }
  friend bool operator==(const AnchorTarget&, const AnchorTarget&) = default;
};

struct AssignmentThresholds {
  double pos_iou{0.5};
  double neg_iou{0.4};
};

/// Max-IoU assignment. An anchor is positive for its best ground truth when that
/// IoU >= pos_iou, negative below neg_iou and ignored in between. Each ground
/// truth with no anchor at IoU >= pos_iou then claims its single best anchor
/// (lowest index on ties), processed in ground-truth order.
[[nodiscard]] std::vector<AnchorTarget> assign_anchors(const std::vector<detector::Anchor>& anchors,
                                                       const std::vector<MovingObjectInstance>& gt,
                                                       AssignmentThresholds thresholds = {});

}  // namespace mor::training
