#include "mor/inference/nms.hpp"

#include <algorithm>
#include <cmath>

#include "mor/core/geometry.hpp"
#include "mor/error.hpp"

namespace mor::inference {

std::vector<Detection> nms(std::vector<Detection> candidates, double iou_threshold) {
  for (const auto& c : candidates) {
    if (!std::isfinite(c.score)) throw NumericError("non-finite detection score");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  std::vector<Detection> kept;
  for (const auto& c : candidates) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return k.label == c.label && iou(k.box, c.box) >= iou_threshold;
    });
    if (!suppressed) kept.push_back(c);
  }
  return kept;
}

}  // namespace mor::inference
