#pragma once

#include <vector>

#include "mor/inference/detection.hpp"

namespace mor::inference {

/// Greedy per-class suppression. Candidates are visited by descending score;
/// equal scores keep their input order, so callers control tie-breaking. Any
/// two kept boxes of one class overlap with IoU < `iou_threshold`. The result
/// is ordered by descending score.
[[nodiscard]] std::vector<Detection> nms(std::vector<Detection> candidates, double iou_threshold);

}  // namespace mor::inference
