#include "mor/training/assign.hpp"

#include "mor/core/geometry.hpp"
#include "mor/error.hpp"

namespace mor::training {

std::vector<AnchorTarget> assign_anchors(const std::vector<detector::Anchor>& anchors,
                                         const std::vector<MovingObjectInstance>& gt,
                                         AssignmentThresholds th) {
  if (!(0.0 <= th.neg_iou && th.neg_iou <= th.pos_iou && th.pos_iou <= 1.0)) {
    throw ConfigError("assignment thresholds need 0 <= neg_iou <= pos_iou <= 1");
  }
  std::vector<AnchorTarget> out(anchors.size());
  if (gt.empty()) return out;

  std::vector<double> best_anchor_iou(gt.size(), -1.0);
  std::vector<std::size_t> best_anchor(gt.size(), 0);
  std::vector<bool> has_qualifying(gt.size(), false);

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const auto abox = anchors[a].box();
    double best = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const double v = iou(abox, gt[g].box);
      if (v > best) {
        best = v;
        best_gt = static_cast<int>(g);
      }
      if (v > best_anchor_iou[g]) {
        best_anchor_iou[g] = v;
        best_anchor[g] = a;
      }
      if (v >= th.pos_iou) has_qualifying[g] = true;
    }
    auto& t = out[a];
    t.max_iou = best;
    if (best_gt >= 0 && best >= th.pos_iou) {
      t.label = class_id(gt[static_cast<std::size_t>(best_gt)].label);
      t.gt_index = best_gt;
    } else if (best < th.neg_iou) {
      t.label = AnchorTarget::kNegative;
    } else {
      t.label = AnchorTarget::kIgnore;
    }
  }

  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (has_qualifying[g] || best_anchor_iou[g] <= 0.0) continue;
    auto& t = out[best_anchor[g]];
    t.label = class_id(gt[g].label);
    t.gt_index = static_cast<int>(g);
  }
  return out;
}

}  // namespace mor::training
