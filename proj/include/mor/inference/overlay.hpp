#pragma once

#include <vector>

#include <opencv2/core.hpp>

#include "mor/inference/detection.hpp"

namespace mor::inference {

/// BGR color per class: red for car, green for heavy vehicle.
[[nodiscard]] cv::Scalar class_color(ClassLabel label) noexcept;

/// Copy of `frame` with every detection drawn as a class-colored rectangle.
[[nodiscard]] cv::Mat render_overlay(const cv::Mat& frame, const std::vector<Detection>& detections);

}  // namespace mor::inference
