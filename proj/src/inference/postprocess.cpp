#include "mor/inference/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "mor/error.hpp"
#include "mor/inference/nms.hpp"

namespace mor::inference {
namespace {

struct Candidate {
  std::size_t anchor;
  int cls;
  double score;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<Detection> postprocess(std::span<const float> logits, std::span<const float> deltas,
                                   const detector::AnchorGrid& anchors,
                                   const detector::BoxCoder& coder, const InferenceConfig& config,
                                   cv::Size frame, std::int64_t frame_index) {
  const std::size_t n = anchors.size();
  if (n == 0 || logits.size() % n != 0 || deltas.size() != n * 4) {
    throw ShapeError("prediction sizes do not match the anchor grid");
  }
  const auto k = static_cast<int>(logits.size() / n);
  for (float v : logits) {
    if (!std::isfinite(v)) throw NumericError("non-finite class logit");
  }

  std::vector<Detection> merged;
  for (int level = 0; level < detector::kNumLevels; ++level) {
    std::vector<Candidate> level_candidates;
    for (std::size_t a = anchors.level_offsets[level]; a < anchors.level_offsets[level + 1]; ++a) {
      for (int c = 0; c < k; ++c) {
        const double s = sigmoid(logits[a * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)]);
        if (s > config.confidence_floor) level_candidates.push_back({a, c, s});
      }
    }
    const auto keep = std::min<std::size_t>(level_candidates.size(),
                                            static_cast<std::size_t>(config.top_k_per_level));
    std::stable_sort(level_candidates.begin(), level_candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    level_candidates.resize(keep);
    std::sort(level_candidates.begin(), level_candidates.end(), [](const Candidate& x, const Candidate& y) {
      return x.anchor != y.anchor ? x.anchor < y.anchor : x.cls < y.cls;
    });
    for (const auto& cand : level_candidates) {
      const float* d = deltas.data() + cand.anchor * 4;
      const detector::BoxDeltas bd{d[0], d[1], d[2], d[3]};
      const auto box = coder.decode_clipped(bd, anchors.anchors[cand.anchor], frame.width, frame.height);
      if (!box.is_valid()) continue;
      merged.push_back({box, class_from_id(cand.cls), cand.score, frame_index});
    }
  }
  // `merged` is in anchor order; nms() keeps that order among equal scores.
  auto kept = nms(std::move(merged), config.nms_iou);
  if (kept.size() > static_cast<std::size_t>(config.max_detections_per_frame)) {
    kept.resize(static_cast<std::size_t>(config.max_detections_per_frame));
  }
  return kept;
}

std::vector<Detection> rescale_detections(std::vector<Detection> detections, cv::Size from,
                                          cv::Size to) {
  if (from == to) return detections;
  const double sx = static_cast<double>(to.width) / from.width;
  const double sy = static_cast<double>(to.height) / from.height;
  for (auto& d : detections) {
    d.box = {d.box.x1 * sx, d.box.y1 * sy, d.box.x2 * sx, d.box.y2 * sy};
  }
  return detections;
}

}  // namespace mor::inference
