#include "mor/inference/overlay.hpp"

#include <cmath>

#include <opencv2/imgproc.hpp>

namespace mor::inference {

cv::Scalar class_color(ClassLabel label) noexcept {
  return label == ClassLabel::Car ? cv::Scalar(0, 0, 255) : cv::Scalar(0, 255, 0);
}

cv::Mat render_overlay(const cv::Mat& frame, const std::vector<Detection>& detections) {
  cv::Mat out = frame.clone();
  for (const auto& d : detections) {
    const cv::Point p1(static_cast<int>(std::lround(d.box.x1)), static_cast<int>(std::lround(d.box.y1)));
    const cv::Point p2(static_cast<int>(std::lround(d.box.x2)) - 1,
                       static_cast<int>(std::lround(d.box.y2)) - 1);
    cv::rectangle(out, p1, p2, class_color(d.label), 1);
  }
  return out;
}

}  // namespace mor::inference
