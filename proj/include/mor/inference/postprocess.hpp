#pragma once

#include <span>
#include <vector>

#include <opencv2/core.hpp>

#include "mor/detector/anchors.hpp"
#include "mor/detector/box_coder.hpp"
#include "mor/inference/detection.hpp"

namespace mor::inference {

/// Turns raw head outputs for one frame into detections.
///
/// `logits` is N x K pre-sigmoid scores, `deltas` is N x 4, both row-major in
/// anchor order. Per level, (anchor, class) pairs scoring above the confidence
/// floor are ranked and the best `top_k_per_level` kept; boxes are decoded and
/// clipped to `frame`, levels merged, per-class NMS applied (ties resolved by
/// lower anchor index) and the result capped at `max_detections_per_frame`.
/// Throws NumericError on non-finite inputs.
[[nodiscard]] std::vector<Detection> postprocess(std::span<const float> logits,
                                                 std::span<const float> deltas,
                                                 const detector::AnchorGrid& anchors,
                                                 const detector::BoxCoder& coder,
                                                 const InferenceConfig& config, cv::Size frame,
                                                 std::int64_t frame_index);

/// Maps boxes from model-input coordinates back to the source frame size.
[[nodiscard]] std::vector<Detection> rescale_detections(std::vector<Detection> detections,
                                                        cv::Size from, cv::Size to);

}  // namespace mor::inference
